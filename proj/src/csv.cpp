#include "drix/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "drix/errors.hpp"

namespace drix::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

int Table::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    Table table;
    table.path = path;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected " << table.header.size()
                << " fields, got " << fields.size();
            throw ValidationError(msg.str());
        }
        table.rows.push_back({std::move(fields), lineno});
    }
    if (!have_header) throw ValidationError(path + ": empty file, header row required");
    return table;
}

void require_header(const Table& table, const std::vector<std::string>& expected) {
    if (table.header != expected) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        std::string got;
        for (const auto& h : table.header) got += (got.empty() ? "" : ",") + h;
        throw ValidationError(table.path + ": schema error, expected header '" + want +
                              "', got '" + got + "'");
    }
}

double parse_double(const Table& table, const Row& row, int col) {
    const std::string& s = row.fields[col];
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        std::ostringstream msg;
        msg << table.path << ":" << row.line << ": malformed number '" << s << "' in column '"
            << table.header[col] << "'";
        throw ValidationError(msg.str());
    }
    return value;
}

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows,
                const std::vector<std::string>& comment_lines) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace drix::csv
