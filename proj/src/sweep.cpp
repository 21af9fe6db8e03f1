#include "lhvsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>
#include <thread>

#include "lhvsim/errors.hpp"

namespace lhvsim::sweep {

namespace {

unsigned resolve_threads(unsigned requested, std::size_t tasks) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// Runs task(k) for k in [0, count). Each task writes only its own slot, so the
// result does not depend on which worker ran it.
template <typename Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  const unsigned workers = resolve_threads(threads, count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count && !failed; k = next++) {
          try {
            task(k);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

ExperimentConfig cell_config(const ExperimentConfig& base, double d, double t) {
  ExperimentConfig cfg = base;
  cfg.noise = NoiseConfig(d);
  cfg.threshold = t;
  return cfg;
}

}  // namespace

void AxisSpec::validate() const {
  if (steps < 1) throw std::invalid_argument("axis needs at least one step");
  if (!(start <= stop)) throw std::invalid_argument("axis start must not exceed stop");
}

std::vector<double> AxisSpec::values() const {
  validate();
  std::vector<double> v(static_cast<std::size_t>(steps));
  if (steps == 1) {
    v[0] = start;
    return v;
  }
  const double span = stop - start;
  for (int i = 0; i < steps; ++i) v[i] = start + span * i / (steps - 1);
  v.back() = stop;
  return v;
}

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::correlation:
      return "correlation";
    case Metric::efficiency:
      return "efficiency";
    case Metric::visibility:
      return "visibility";
    case Metric::violation:
      return "violation";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::correlation, Metric::efficiency, Metric::visibility, Metric::violation}) {
    if (metric_name(m) == name) return m;
  }
  throw UnknownMetric(std::string(name));
}

void SweepSpec::validate() const {
  d_axis.validate();
  t_axis.validate();
  if (metrics.empty()) throw std::invalid_argument("sweep needs at least one metric");
  if (d_axis.start < 0.0 || d_axis.stop > 1.0) throw std::invalid_argument("decoherence axis outside [0, 1]");
  if (t_axis.start < 0.0 || t_axis.stop > 0.5) throw std::invalid_argument("threshold axis outside [0, 0.5]");
  if (chsh_pairs < 1) throw std::invalid_argument("chsh_pairs must be >= 1");
  base_config.validate();
}

std::optional<double> MetricGrid::at(std::size_t i, std::size_t j) const {
  const std::size_t k = i * cols + j;
  if (status.at(k) != CellStatus::ok) return std::nullopt;
  return values[k];
}

void MetricGrid::set(std::size_t i, std::size_t j, double v) {
  const std::size_t k = i * cols + j;
  values.at(k) = v;
  status[k] = CellStatus::ok;
}

const MetricGrid& GridResult::grid(Metric m) const {
  const auto it = metrics.find(m);
  if (it == metrics.end()) throw UnknownMetric(std::string(metric_name(m)));
  return it->second;
}

GridResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const bool wants_efficiency = std::ranges::count(spec.metrics, Metric::efficiency) > 0;
  const bool wants_visibility = std::ranges::count(spec.metrics, Metric::visibility) > 0;
  const bool wants_violation = std::ranges::count(spec.metrics, Metric::violation) > 0;
  if (std::ranges::count(spec.metrics, Metric::correlation) > 0) {
    throw std::invalid_argument("the correlation metric is a curve per cell; use correlation_surface");
  }

  GridResult out;
  out.d_values = spec.d_axis.values();
  out.t_values = spec.t_axis.values();
  const std::size_t rows = out.d_values.size();
  const std::size_t cols = out.t_values.size();
  for (Metric m : spec.metrics) out.metrics.try_emplace(m, rows, cols);
  if (wants_violation) out.chsh_s.emplace(rows, cols);

  const RandomStream root(spec.base_config.master_seed);
  const RandomStream scan_root = root.split(kScanFamily);
  const RandomStream chsh_root = root.split(kChshFamily);

  parallel_for(rows * cols, spec.threads, [&](std::size_t cell) {
    const std::size_t i = cell / cols;
    const std::size_t j = cell % cols;
    const ExperimentConfig cfg = cell_config(spec.base_config, out.d_values[i], out.t_values[j]);
    if (wants_efficiency || wants_visibility) {
      const CorrelationCurve curve = correlation_scan(cfg, scan_root.split(i).split(j));
      if (wants_efficiency) out.metrics.at(Metric::efficiency).set(i, j, efficiency(curve));
      if (wants_visibility) {
        try {
          out.metrics.at(Metric::visibility).set(i, j, visibility(curve));
        } catch (const AllZeroCounts&) {
        }
      }
    }
    if (wants_violation) {
      try {
        const ChshResult r = chsh(cfg, spec.angles, spec.chsh_pairs, chsh_root.split(i).split(j));
        out.metrics.at(Metric::violation).set(i, j, r.violation);
        out.chsh_s->set(i, j, r.s_value);
      } catch (const NoCoincidences&) {
      }
    }
  });
  return out;
}

double fraction_above(const GridResult& grid, Metric metric, double cutoff) {
  const MetricGrid& g = grid.grid(metric);
  std::size_t ok = 0;
  std::size_t above = 0;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (g.status[k] != CellStatus::ok) continue;
    ++ok;
    if (g.values[k] > cutoff) ++above;
  }
  return ok == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(ok);
}

double fraction_above(const GridResult& grid, std::string_view metric, double cutoff) {
  return fraction_above(grid, parse_metric(metric), cutoff);
}

double CorrelationSurface::frequency(std::size_t i, std::size_t k) const {
  const CoincidenceCounts& c = counts.at(i).at(k);
  return static_cast<double>(c.n_pp) / static_cast<double>(c.n_total);
}

CorrelationSurface correlation_surface(const SweepSpec& spec) {
  spec.d_axis.validate();
  spec.base_config.validate();
  CorrelationSurface out;
  out.d_values = spec.d_axis.values();
  const ExperimentConfig& base = spec.base_config;
  for (std::size_t k = 0; k < base.setting_count(); ++k) out.alphas.push_back(base.alpha_at(k));
  out.counts.resize(out.d_values.size());

  const RandomStream family = RandomStream(base.master_seed).split(kCorrelationFamily);
  parallel_for(out.d_values.size(), spec.threads, [&](std::size_t i) {
    const ExperimentConfig cfg = cell_config(base, out.d_values[i], base.threshold);
    out.counts[i] = correlation_scan(cfg, family.split(i)).counts;
  });
  return out;
}

}  // namespace lhvsim::sweep
