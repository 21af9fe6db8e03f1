#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lhvsim/sweep.hpp"

namespace lhvsim::io {

inline constexpr std::string_view kToolName = "lhvsim";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kUndefined = "undef";

// Six significant digits, '.' separator, independent of the global locale.
std::string format_real(double v);
std::string format_cell(std::optional<double> v);

std::string iso8601_utc_now();

// Everything needed to rerun a command: the resolved configuration in
// `key = value` form. The timestamp is informational only.
struct RunManifest {
  std::string tool_version{kToolVersion};
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t master_seed = 0;
  std::string timestamp;
  std::vector<std::pair<std::string, std::string>> results;
};

// Emits `# `-prefixed manifest lines; the timestamp sits on its own line.
void write_manifest(std::ostream& out, const RunManifest& manifest);

void write_row(std::ostream& out, const std::vector<std::string>& cells);

// Heat-map layout: corner label, then one column per column value; one row
// per row value with the row value in the first column.
void write_matrix(std::ostream& out, std::string_view corner, const std::vector<double>& row_values,
                  const std::vector<double>& col_values, const sweep::MetricGrid& grid);

// Splits data rows (non-comment, non-empty) out of CSV text.
std::vector<std::string> data_rows(std::string_view csv);

}  // namespace lhvsim::io
