#include "lhvsim/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lhvsim {

AnalyzerConfig::AnalyzerConfig(Angle angle, double threshold)
    : angle_(angle), threshold_(threshold) {
  if (!(threshold >= 0.0 && threshold <= 0.5)) {
    throw std::invalid_argument("analyzer threshold must lie in [0, 0.5], got " +
                                std::to_string(threshold));
  }
}

NoiseConfig::NoiseConfig(double decoherence) : decoherence_(decoherence) {
  if (!(decoherence >= 0.0 && decoherence <= 1.0)) {
    throw std::invalid_argument("decoherence must lie in [0, 1], got " +
                                std::to_string(decoherence));
  }
}

const char* to_string(Channel c) noexcept {
  switch (c) {
    case Channel::Plus:
      return "+";
    case Channel::Minus:
      return "-";
    case Channel::Undetected:
      return "0";
  }
  return "?";
}

PhotonPair pair_from_phase(double u) {
  const double phase = kTwoPi * u;
  return {Angle(phase), Angle(phase + kHalfPi)};
}

PhotonPair emit_pair(RandomStream& rng) { return pair_from_phase(rng.uniform()); }

PhotonPair apply_decoherence(const PhotonPair& pair, const NoiseConfig& noise, RandomStream& rng) {
  const double w = noise.half_width();
  const double delta1 = rng.uniform(-w, w);
  const double delta2 = rng.uniform(-w, w);
  if (w == 0.0) return pair;
  return {pair.phi1 + delta1, pair.phi2 + delta2};
}

double project_intensity(Angle phi, Angle alpha) {
  const double c = std::cos(phi.radians() - alpha.radians());
  return c * c;
}

Channel detect(Angle phi, const AnalyzerConfig& analyzer) {
  // cos²θ − 1/2 == cos(2θ)/2, which keeps full precision near the 45° boundary.
  const double margin = 0.5 * std::cos(2.0 * (phi.radians() - analyzer.angle().radians()));
  const double cut = analyzer.threshold() + kBoundaryTolerance;
  if (margin > cut) return Channel::Plus;
  if (-margin > cut) return Channel::Minus;
  return Channel::Undetected;
}

PairOutcome measure_pair(const PhotonPair& pair, const AnalyzerConfig& analyzer_a,
                         const AnalyzerConfig& analyzer_b) {
  return {detect(pair.phi1, analyzer_a), detect(pair.phi2, analyzer_b)};
}

}  // namespace lhvsim
