#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "lhvsim/analysis.hpp"

namespace lhvsim::sweep {

// Inclusive, evenly spaced axis.
struct AxisSpec {
  double start = 0.0;
  double stop = 1.0;
  int steps = 51;

  void validate() const;
  std::vector<double> values() const;
};

enum class Metric { correlation, efficiency, visibility, violation };

std::string_view metric_name(Metric m) noexcept;
// Throws UnknownMetric.
Metric parse_metric(std::string_view name);

struct SweepSpec {
  AxisSpec d_axis{0.0, 1.0, 51};
  AxisSpec t_axis{0.0, 0.5, 51};
  std::vector<Metric> metrics{Metric::visibility};
  ExperimentConfig base_config{};
  std::uint64_t chsh_pairs = 10000;
  ChshAngles angles{};
  unsigned threads = 0;  // 0: one per hardware thread

  void validate() const;
};

enum class CellStatus { ok, undefined };

// Row-major [d][t] matrix with per-cell status.
struct MetricGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<CellStatus> status;

  MetricGrid() = default;
  MetricGrid(std::size_t r, std::size_t c)
      : rows(r), cols(c), values(r * c, 0.0), status(r * c, CellStatus::undefined) {}

  std::optional<double> at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);
};

struct GridResult {
  std::vector<double> d_values;
  std::vector<double> t_values;
  std::map<Metric, MetricGrid> metrics;
  // Unclipped CHSH S, present whenever violation was requested.
  std::optional<MetricGrid> chsh_s;

  // Throws UnknownMetric when the metric was not part of the sweep.
  const MetricGrid& grid(Metric m) const;
};

// Stream families; cell (i, j) of a family draws from root.split(family).split(i).split(j).
inline constexpr std::uint64_t kCorrelationFamily = 0;
inline constexpr std::uint64_t kScanFamily = 1;
inline constexpr std::uint64_t kChshFamily = 2;

// Efficiency and visibility come from one correlation scan per cell, the
// violation from one CHSH datapoint per cell. Undefined cells never abort.
GridResult run_sweep(const SweepSpec& spec);

// Fraction of ok cells whose value exceeds cutoff (0 when no cell is ok).
double fraction_above(const GridResult& grid, Metric metric, double cutoff);
double fraction_above(const GridResult& grid, std::string_view metric, double cutoff);

struct CorrelationSurface {
  std::vector<double> d_values;
  std::vector<Angle> alphas;
  std::vector<std::vector<CoincidenceCounts>> counts;  // [d][alpha]

  double frequency(std::size_t i, std::size_t k) const;
};

// One correlation scan per decoherence value at the base threshold.
CorrelationSurface correlation_surface(const SweepSpec& spec);

}  // namespace lhvsim::sweep
