#pragma once

#include <string>

#include "drix/pipeline.hpp"

namespace drix::report {

/// "-0.15 a (0.03)": coefficient to 2 decimals, star letter, stderr in
/// parentheses.
std::string format_cell(double coef, double stderr_value, double p_value);

/// Table-1/Table-2 style plain-text summary (carries a generated-at line).
std::string render_text(const pipeline::RunReport& report);

/// Schema-versioned JSON with full numeric precision. Deterministic: sorted
/// keys, shortest round-trip numbers, no timestamps.
std::string render_json(const pipeline::RunReport& report);

/// Inverse of render_json; re-rendering the result reproduces the bytes.
pipeline::RunReport parse_json(const std::string& text);

/// One CSV file per table: table1.csv, table2.csv, index.csv, weights.json,
/// correlation.csv, variance_decomposition.csv, unit_roots.csv.
void write_csv_tables(const pipeline::RunReport& report, const std::string& directory);

/// report.json + report.txt + the CSV set.
void write_all(const pipeline::RunReport& report, const std::string& directory);

}  // namespace drix::report
