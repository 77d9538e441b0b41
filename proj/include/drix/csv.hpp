#pragma once

#include <string>
#include <vector>

namespace drix::csv {

struct Row {
    std::vector<std::string> fields;
    int line = 0;  // 1-based source line, for diagnostics
};

struct Table {
    std::string path;
    std::vector<std::string> header;
    std::vector<Row> rows;

    int column(const std::string& name) const;  // -1 if absent
};

/// Reads a comma-separated file with a mandatory header row. Blank lines and
/// lines starting with '#' are skipped. No quoting: all inputs here are plain
/// identifiers, dates and numbers.
Table read_file(const std::string& path);

/// Validates the header, raising a schema error naming the file otherwise.
void require_header(const Table& table, const std::vector<std::string>& expected);

double parse_double(const Table& table, const Row& row, int col);

/// Shortest round-trip decimal form; reloading reproduces the exact bits.
std::string format_double(double v);

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows,
                const std::vector<std::string>& comment_lines = {});

}  // namespace drix::csv
