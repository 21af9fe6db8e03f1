#include "lhvsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lhvsim/errors.hpp"

namespace lhvsim {

void CoincidenceCounts::record(const PairOutcome& outcome) noexcept {
  ++n_total;
  if (!outcome.coincidence()) {
    ++n_lost;
    return;
  }
  const bool a_plus = outcome.a == Channel::Plus;
  const bool b_plus = outcome.b == Channel::Plus;
  if (a_plus && b_plus) {
    ++n_pp;
  } else if (a_plus) {
    ++n_pm;
  } else if (b_plus) {
    ++n_mp;
  } else {
    ++n_mm;
  }
}

void ExperimentConfig::validate() const {
  if (pairs_per_setting < 1) throw std::invalid_argument("pairs_per_setting must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 0.5)) {
    throw std::invalid_argument("threshold must lie in [0, 0.5]");
  }
  if (!(alpha_step > 0.0) || !std::isfinite(alpha_step)) {
    throw std::invalid_argument("alpha_step must be positive");
  }
  if (!(alpha_start >= 0.0 && alpha_start < alpha_stop && alpha_stop <= kPi)) {
    throw std::invalid_argument("alpha range must satisfy 0 <= start < stop <= pi");
  }
}

std::size_t ExperimentConfig::setting_count() const {
  // The range is half-open; the small slack absorbs rounding in (stop − start)/step.
  const double n = (alpha_stop - alpha_start) / alpha_step;
  return static_cast<std::size_t>(std::ceil(n - 1e-9));
}

ChshResult assemble_chsh(double e11, double e12, double e21, double e22) noexcept {
  ChshResult r{e11, e12, e21, e22, 0.0, 0.0};
  r.s_value = std::abs(e11 - e12) + std::abs(e21 + e22);
  r.violation = std::max(r.s_value - 2.0, 0.0);
  return r;
}

CoincidenceCounts run_setting(const ExperimentConfig& cfg, Angle alpha, Angle beta,
                              std::uint64_t n_pairs, RandomStream stream) {
  const AnalyzerConfig analyzer_a(alpha, cfg.threshold);
  const AnalyzerConfig analyzer_b(beta, cfg.threshold);
  CoincidenceCounts counts;
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    const PhotonPair emitted = emit_pair(stream);
    const PhotonPair pair = apply_decoherence(emitted, cfg.noise, stream);
    counts.record(measure_pair(pair, analyzer_a, analyzer_b));
  }
  return counts;
}

CorrelationCurve correlation_scan(const ExperimentConfig& cfg, const RandomStream& base) {
  cfg.validate();
  const std::size_t n = cfg.setting_count();
  CorrelationCurve curve;
  curve.alphas.reserve(n);
  curve.counts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Angle alpha = cfg.alpha_at(k);
    curve.alphas.push_back(alpha);
    curve.counts.push_back(run_setting(cfg, alpha, cfg.beta, cfg.pairs_per_setting, base.split(k)));
  }
  return curve;
}

CorrelationCurve correlation_scan(const ExperimentConfig& cfg) {
  return correlation_scan(cfg, RandomStream(cfg.master_seed));
}

double visibility(const CorrelationCurve& curve) {
  if (curve.counts.empty()) throw AllZeroCounts();
  const auto [lo, hi] = std::minmax_element(
      curve.counts.begin(), curve.counts.end(),
      [](const CoincidenceCounts& x, const CoincidenceCounts& y) { return x.n_pp < y.n_pp; });
  if (hi->n_pp == 0) throw AllZeroCounts();
  const auto max = static_cast<double>(hi->n_pp);
  const auto min = static_cast<double>(lo->n_pp);
  return (max - min) / (max + min);
}

double efficiency(const CoincidenceCounts& counts) {
  if (counts.n_total == 0) throw std::invalid_argument("efficiency of an empty run");
  return static_cast<double>(counts.coincidences()) / static_cast<double>(counts.n_total);
}

double efficiency(const CorrelationCurve& curve) {
  CoincidenceCounts pooled;
  for (const auto& c : curve.counts) {
    pooled.n_pp += c.n_pp;
    pooled.n_pm += c.n_pm;
    pooled.n_mp += c.n_mp;
    pooled.n_mm += c.n_mm;
    pooled.n_lost += c.n_lost;
    pooled.n_total += c.n_total;
  }
  return efficiency(pooled);
}

double correlation_coefficient(const CoincidenceCounts& counts, const std::string& term) {
  const std::uint64_t total = counts.coincidences();
  if (total == 0) throw NoCoincidences(term);
  const auto agree = static_cast<double>(counts.n_pp + counts.n_mm);
  const auto disagree = static_cast<double>(counts.n_pm + counts.n_mp);
  return (agree - disagree) / static_cast<double>(total);
}

ChshResult chsh(const ExperimentConfig& cfg, const ChshAngles& angles, std::uint64_t n_pairs,
                const RandomStream& base) {
  cfg.validate();
  if (n_pairs < 1) throw std::invalid_argument("chsh needs at least one pair per term");
  std::array<double, 4> e{};
  const auto terms = angles.terms();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto counts = run_setting(cfg, terms[t].first, terms[t].second, n_pairs, base.split(t));
    e[t] = correlation_coefficient(counts, kChshTermNames[t]);
  }
  return assemble_chsh(e[0], e[1], e[2], e[3]);
}

ChshResult chsh(const ExperimentConfig& cfg, const ChshAngles& angles, std::uint64_t n_pairs) {
  return chsh(cfg, angles, n_pairs, RandomStream(cfg.master_seed));
}

}  // namespace lhvsim
