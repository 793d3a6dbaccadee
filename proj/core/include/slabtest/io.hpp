#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slabtest/procedures.hpp"
#include "slabtest/simulation.hpp"

namespace slabtest {

/// Library version, e.g. "0.1.0".
std::string_view version();

/// Observations, one decimal per line, optionally preceded by a header line
/// `x`. Blank lines are skipped. Throws IoError naming the source and line.
std::vector<double> parse_observations(std::istream& in, const std::string& source);
std::vector<double> read_observations(const std::filesystem::path& path);

/// Metrics table columns, in output order.
const std::vector<std::string>& metrics_columns();

/// CSV with a "# slabtest <version>" comment, the metrics header and one row
/// per (cell, procedure). Reals use 17 significant digits; absent standard
/// errors are empty fields.
void write_metrics_csv(std::ostream& out, const std::vector<CellResult>& results);

/// Generic numeric CSV with the same version comment.
void write_numeric_csv(std::ostream& out, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

/// Analyze-mode report of one outcome, keys in a fixed order.
std::string outcome_to_json(const TestOutcome& outcome, const std::string& prior_id,
                            const WeightEstimate& weight);
/// Inverse of outcome_to_json for the outcome part.
TestOutcome outcome_from_json(std::string_view text);

/// Writes text to path, replacing it. Throws IoError with the path.
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Grid specification: "lin:a:b:k", "log:a:b:k" (k points, inclusive ends,
/// log spacing needs a, b > 0) or a comma separated list of reals. Throws
/// DomainError.
std::vector<double> parse_grid(std::string_view spec);

/// Formats a real with 17 significant digits.
std::string format_real17(double v);

}  // namespace slabtest
