#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lhvsim/model.hpp"

namespace lhvsim {

// Coincidence tallies of one polarizer setting.
struct CoincidenceCounts {
  std::uint64_t n_pp = 0;
  std::uint64_t n_pm = 0;
  std::uint64_t n_mp = 0;
  std::uint64_t n_mm = 0;
  std::uint64_t n_lost = 0;  // at least one arm undetected
  std::uint64_t n_total = 0;

  std::uint64_t coincidences() const noexcept { return n_pp + n_pm + n_mp + n_mm; }
  bool conserved() const noexcept { return coincidences() + n_lost == n_total; }
  void record(const PairOutcome& outcome) noexcept;

  friend bool operator==(const CoincidenceCounts&, const CoincidenceCounts&) = default;
};

struct ExperimentConfig {
  std::uint64_t pairs_per_setting = 2000;
  NoiseConfig noise{};
  double threshold = 0.0;
  Angle beta{};
  double alpha_step = kPi / 100.0;
  double alpha_start = 0.0;
  double alpha_stop = kPi;
  std::uint64_t master_seed = 1;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
  std::size_t setting_count() const;
  Angle alpha_at(std::size_t k) const { return Angle(alpha_start + static_cast<double>(k) * alpha_step); }
};

struct CorrelationCurve {
  std::vector<Angle> alphas;
  std::vector<CoincidenceCounts> counts;
};

// The four terms are E(a,b), E(a,b'), E(a',b), E(a',b').
struct ChshAngles {
  Angle a = Angle::from_degrees(0.0);
  Angle b = Angle::from_degrees(22.5);
  Angle a2 = Angle::from_degrees(45.0);
  Angle b2 = Angle::from_degrees(67.5);

  std::array<std::pair<Angle, Angle>, 4> terms() const { return {{{a, b}, {a, b2}, {a2, b}, {a2, b2}}}; }
};

struct ChshResult {
  double e11 = 0.0;
  double e12 = 0.0;
  double e21 = 0.0;
  double e22 = 0.0;
  double s_value = 0.0;
  double violation = 0.0;  // max(S − 2, 0)
};

// The quantum-mechanical violation quoted as the reference for display.
inline constexpr double kQuantumViolation = 0.82;

inline constexpr std::array<const char*, 4> kChshTermNames = {"E(a,b)", "E(a,b')", "E(a',b)",
                                                              "E(a',b')"};

// S = |E11 − E12| + |E21 + E22|.
ChshResult assemble_chsh(double e11, double e12, double e21, double e22) noexcept;

CoincidenceCounts run_setting(const ExperimentConfig& cfg, Angle alpha, Angle beta,
                              std::uint64_t n_pairs, RandomStream stream);

// Scans polarizer one over [alpha_start, alpha_stop); setting k draws from base.split(k).
CorrelationCurve correlation_scan(const ExperimentConfig& cfg, const RandomStream& base);
CorrelationCurve correlation_scan(const ExperimentConfig& cfg);

// (max − min)/(max + min) of N++ over the scan. Throws AllZeroCounts.
double visibility(const CorrelationCurve& curve);

double efficiency(const CoincidenceCounts& counts);
// Pooled coincidence efficiency over every setting of a scan.
double efficiency(const CorrelationCurve& curve);

// Post-selected E = (N++ + N−− − N+− − N−+)/coincidences. Throws NoCoincidences.
double correlation_coefficient(const CoincidenceCounts& counts, const std::string& term = "setting");

// Term t draws from base.split(t); n_pairs applies to each term.
ChshResult chsh(const ExperimentConfig& cfg, const ChshAngles& angles, std::uint64_t n_pairs,
                const RandomStream& base);
ChshResult chsh(const ExperimentConfig& cfg, const ChshAngles& angles = {},
                std::uint64_t n_pairs = 10000);

}  // namespace lhvsim
