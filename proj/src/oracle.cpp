#include "lhvsim/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "lhvsim/errors.hpp"

namespace lhvsim::oracle {

namespace {

// Arc on the circle R/πZ.
struct Arc {
  double start;
  double width;
};

double wrap_pi(double x) {
  double r = std::fmod(x, kPi);
  if (r < 0.0) r += kPi;
  return r >= kPi ? 0.0 : r;
}

double overlap(Arc x, Arc y) {
  const double xs = wrap_pi(x.start);
  const double ys = wrap_pi(y.start);
  double total = 0.0;
  for (int k = -1; k <= 1; ++k) {
    const double lo = std::max(xs, ys + k * kPi);
    const double hi = std::min(xs + x.width, ys + k * kPi + y.width);
    total += std::max(0.0, hi - lo);
  }
  return total;
}

// Detection arcs of one arm, in the coordinate of its own photon angle.
struct ArmArcs {
  Arc plus;
  Arc minus;
  std::array<Arc, 2> lost;

  ArmArcs shifted(double offset) const {
    auto move = [offset](Arc a) { return Arc{a.start + offset, a.width}; };
    return {move(plus), move(minus), {move(lost[0]), move(lost[1])}};
  }

  std::array<double, 4> endpoints() const {
    return {plus.start, plus.start + plus.width, minus.start, minus.start + minus.width};
  }
};

ArmArcs arm_arcs(double analyzer, double threshold) {
  // cos(2θ) > 2Δs  ⇔  |θ| < c/2 (mod π)
  const double c = std::acos(std::clamp(2.0 * threshold, -1.0, 1.0));
  const double gap = kHalfPi - c;
  return {Arc{analyzer - 0.5 * c, c},
          Arc{analyzer + kHalfPi - 0.5 * c, c},
          {Arc{analyzer + 0.5 * c, gap}, Arc{analyzer + kHalfPi + 0.5 * c, gap}}};
}

double lost_measure(const ArmArcs& a, const ArmArcs& b) {
  double both = 0.0;
  for (const Arc& x : a.lost) {
    for (const Arc& y : b.lost) both += overlap(x, y);
  }
  const double la = a.lost[0].width + a.lost[1].width;
  const double lb = b.lost[0].width + b.lost[1].width;
  return la + lb - both;
}

// Class probabilities for a fixed relative perturbation Δ, expressed in the
// arm-one photon angle ψ. Arm two sees ψ + π/2 + Δ.
ClassProbabilities at_offset(const ArmArcs& a, const ArmArcs& b_own, double delta) {
  const ArmArcs b = b_own.shifted(-kHalfPi - delta);
  auto fraction = [](double measure) { return std::clamp(measure / kPi, 0.0, 1.0); };
  return {fraction(overlap(a.plus, b.plus)), fraction(overlap(a.plus, b.minus)),
          fraction(overlap(a.minus, b.plus)), fraction(overlap(a.minus, b.minus)),
          fraction(lost_measure(a, b))};
}

void validate_inputs(double threshold, double decoherence) {
  if (!(threshold >= 0.0 && threshold <= 0.5)) {
    throw std::invalid_argument("threshold must lie in [0, 0.5]");
  }
  if (!(decoherence >= 0.0 && decoherence <= 1.0)) {
    throw std::invalid_argument("decoherence must lie in [0, 1]");
  }
}

}  // namespace

double ClassProbabilities::operator[](OutcomeClass c) const noexcept {
  switch (c) {
    case OutcomeClass::pp:
      return pp;
    case OutcomeClass::pm:
      return pm;
    case OutcomeClass::mp:
      return mp;
    case OutcomeClass::mm:
      return mm;
    case OutcomeClass::lost:
      return lost;
  }
  return 0.0;
}

double ideal_coincidence_probability(Angle alpha, Angle beta) {
  const double w = wrap_pi(alpha.radians() - beta.radians()) - kHalfPi;
  return 0.5 - std::abs(w) / kPi;
}

ClassProbabilities outcome_probabilities(Angle alpha, Angle beta, double threshold,
                                         double decoherence, const QuadratureSpec& spec) {
  validate_inputs(threshold, decoherence);
  spec.validate();
  const ArmArcs a = arm_arcs(alpha.radians(), threshold);
  const ArmArcs b = arm_arcs(beta.radians(), threshold);
  if (decoherence == 0.0) return at_offset(a, b, 0.0);

  const double reach = decoherence * kPi;  // |δ₂ − δ₁| ≤ dπ
  const double norm = reach * reach;

  // Δ values at which an arm-two endpoint crosses an arm-one endpoint.
  std::vector<double> breaks{0.0};
  const ArmArcs b_base = b.shifted(-kHalfPi);
  for (double ea : a.endpoints()) {
    for (double eb : b_base.endpoints()) {
      const double r = wrap_pi(eb - ea);
      for (int k = -2; k <= 1; ++k) breaks.push_back(r + k * kPi);
    }
  }

  ClassProbabilities out;
  const std::array<double ClassProbabilities::*, 5> fields = {
      &ClassProbabilities::pp, &ClassProbabilities::pm, &ClassProbabilities::mp,
      &ClassProbabilities::mm, &ClassProbabilities::lost};
  for (auto field : fields) {
    auto integrand = [&](double delta) {
      const double density = (reach - std::abs(delta)) / norm;
      return density * (at_offset(a, b, delta).*field);
    };
    out.*field = std::clamp(integrate(integrand, -reach, reach, spec, breaks).value, 0.0, 1.0);
  }
  return out;
}

double outcome_probability(Angle alpha, Angle beta, double threshold, double decoherence,
                           OutcomeClass cls, const QuadratureSpec& spec) {
  return outcome_probabilities(alpha, beta, threshold, decoherence, spec)[cls];
}

double oracle_efficiency(double threshold, double decoherence, const QuadratureSpec& spec) {
  constexpr int kGrid = 16;
  double sum = 0.0;
  for (int k = 0; k < kGrid; ++k) {
    const Angle relative(k * kPi / kGrid);
    sum += 1.0 - outcome_probabilities(relative, Angle{}, threshold, decoherence, spec).lost;
  }
  return sum / kGrid;
}

ChshResult oracle_chsh(double threshold, double decoherence, const ChshAngles& angles,
                       const QuadratureSpec& spec) {
  std::array<double, 4> e{};
  const auto terms = angles.terms();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto p = outcome_probabilities(terms[t].first, terms[t].second, threshold, decoherence, spec);
    const double tol = spec.abs_tolerance;
    if (p.pp < tol && p.pm < tol && p.mp < tol && p.mm < tol) {
      throw NoCoincidences(kChshTermNames[t]);
    }
    e[t] = (p.pp + p.mm - p.pm - p.mp) / p.coincidences();
  }
  return assemble_chsh(e[0], e[1], e[2], e[3]);
}

std::vector<ClassProbabilities> oracle_scan(const ExperimentConfig& cfg, const QuadratureSpec& spec) {
  cfg.validate();
  std::vector<ClassProbabilities> out;
  const std::size_t n = cfg.setting_count();
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(outcome_probabilities(cfg.alpha_at(k), cfg.beta, cfg.threshold,
                                        cfg.noise.decoherence(), spec));
  }
  return out;
}

double oracle_visibility(const ExperimentConfig& cfg, const QuadratureSpec& spec) {
  const auto scan = oracle_scan(cfg, spec);
  double max = 0.0;
  double min = 1.0;
  for (const auto& p : scan) {
    max = std::max(max, p.pp);
    min = std::min(min, p.pp);
  }
  if (max < spec.abs_tolerance) throw AllZeroCounts();
  return (max - min) / (max + min);
}

}  // namespace lhvsim::oracle
