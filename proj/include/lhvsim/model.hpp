#pragma once

#include "lhvsim/angle.hpp"
#include "lhvsim/random_stream.hpp"

namespace lhvsim {

// Hidden polarization angles of an entangled photon pair.
struct PhotonPair {
  Angle phi1;
  Angle phi2;
};

// Polarizer beam splitter: orientation plus intensity margin Δs in [0, 0.5].
class AnalyzerConfig {
 public:
  AnalyzerConfig(Angle angle, double threshold);

  Angle angle() const noexcept { return angle_; }
  double threshold() const noexcept { return threshold_; }

 private:
  Angle angle_;
  double threshold_;
};

// Fraction d in [0, 1] of half a wavelength of optical path that is random.
class NoiseConfig {
 public:
  NoiseConfig() = default;
  explicit NoiseConfig(double decoherence);

  double decoherence() const noexcept { return decoherence_; }
  // Half-width of the per-photon angle perturbation, d·π/2.
  double half_width() const noexcept { return decoherence_ * kHalfPi; }

 private:
  double decoherence_ = 0.0;
};

enum class Channel { Plus, Minus, Undetected };

struct PairOutcome {
  Channel a = Channel::Undetected;
  Channel b = Channel::Undetected;

  bool coincidence() const noexcept {
    return a != Channel::Undetected && b != Channel::Undetected;
  }
  friend bool operator==(const PairOutcome&, const PairOutcome&) = default;
};

const char* to_string(Channel c) noexcept;

// Maps one uniform variate u in [0, 1) onto the pair phase 2πu, photon two
// a quarter period ahead.
PhotonPair pair_from_phase(double u);
// Consumes exactly one draw.
PhotonPair emit_pair(RandomStream& rng);

// Perturbs each photon independently by δ ~ U[-dπ/2, dπ/2); arm 1 drawn
// first. Always consumes two draws, also at d = 0.
PhotonPair apply_decoherence(const PhotonPair& pair, const NoiseConfig& noise, RandomStream& rng);

double project_intensity(Angle phi, Angle alpha);

// Plus iff cos² − 1/2 > Δs, Minus iff 1/2 − cos² > Δs, otherwise Undetected.
// Margins within kBoundaryTolerance of Δs count as ties (Undetected) so that
// rounding in cos² cannot turn the exact 45° boundary into a detection.
inline constexpr double kBoundaryTolerance = 1e-12;
Channel detect(Angle phi, const AnalyzerConfig& analyzer);

PairOutcome measure_pair(const PhotonPair& pair, const AnalyzerConfig& analyzer_a,
                         const AnalyzerConfig& analyzer_b);

}  // namespace lhvsim
