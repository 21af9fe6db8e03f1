#include "lhvsim/csv.hpp"

#include <chrono>
#include <ctime>

#include <fmt/format.h>

namespace lhvsim::io {

std::string format_real(double v) {
  // -0 would otherwise leak platform-dependent sign noise into the tables.
  if (v == 0.0) v = 0.0;
  return fmt::format("{:.6g}", v);
}

std::string format_cell(std::optional<double> v) {
  return v ? format_real(*v) : std::string(kUndefined);
}

std::string iso8601_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", utc.tm_year + 1900, utc.tm_mon + 1,
                     utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec);
}

void write_manifest(std::ostream& out, const RunManifest& m) {
  out << "# " << kToolName << ' ' << m.tool_version << '\n';
  out << "# command: " << m.command << '\n';
  out << "# timestamp: " << m.timestamp << '\n';
  out << "# master_seed: " << m.master_seed << '\n';
  for (const auto& [key, value] : m.config) out << "# " << key << " = " << value << '\n';
  for (const auto& [key, value] : m.results) out << "# result " << key << ": " << value << '\n';
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void write_matrix(std::ostream& out, std::string_view corner, const std::vector<double>& row_values,
                  const std::vector<double>& col_values, const sweep::MetricGrid& grid) {
  std::vector<std::string> cells{std::string(corner)};
  for (double c : col_values) cells.push_back(format_real(c));
  write_row(out, cells);
  for (std::size_t i = 0; i < row_values.size(); ++i) {
    cells.assign(1, format_real(row_values[i]));
    for (std::size_t j = 0; j < col_values.size(); ++j) cells.push_back(format_cell(grid.at(i, j)));
    write_row(out, cells);
  }
}

std::vector<std::string> data_rows(std::string_view csv) {
  std::vector<std::string> rows;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = csv.substr(pos, end - pos);
    if (!line.empty() && line.front() != '#') rows.emplace_back(line);
    pos = end + 1;
  }
  return rows;
}

}  // namespace lhvsim::io
