#pragma once

#include <vector>

#include "lhvsim/analysis.hpp"
#include "lhvsim/quadrature.hpp"

// Exact probabilities of the threshold model, evaluated without sampling.
//
// Both detection indicators have period π in the photon angle, and the hidden
// phase is uniform, so only the relative perturbation Δ = δ₂ − δ₁ matters. For
// fixed Δ the phase integral is the exact length of an arc intersection; the
// remaining Δ integral (triangular density on [−dπ, dπ]) is split at every
// value where two arc endpoints meet, which leaves a quadratic integrand on
// each piece.
namespace lhvsim::oracle {

enum class OutcomeClass { pp, pm, mp, mm, lost };

struct ClassProbabilities {
  double pp = 0.0;
  double pm = 0.0;
  double mp = 0.0;
  double mm = 0.0;
  double lost = 0.0;

  double operator[](OutcomeClass c) const noexcept;
  double coincidences() const noexcept { return pp + pm + mp + mm; }
  double sum() const noexcept { return coincidences() + lost; }
};

// Closed form for Δs = 0, d = 0: 1/2 − |w|/π with w = α − β − π/2 wrapped
// into [−π/2, π/2).
double ideal_coincidence_probability(Angle alpha, Angle beta);

ClassProbabilities outcome_probabilities(Angle alpha, Angle beta, double threshold,
                                         double decoherence, const QuadratureSpec& spec = {});
double outcome_probability(Angle alpha, Angle beta, double threshold, double decoherence,
                           OutcomeClass cls, const QuadratureSpec& spec = {});

// 1 − P(lost), averaged over α − β = kπ/16 for k = 0..15.
double oracle_efficiency(double threshold, double decoherence, const QuadratureSpec& spec = {});

// Post-selected E per term, assembled like the sampled CHSH statistic.
// Throws NoCoincidences when every class probability of a term is below
// spec.abs_tolerance.
ChshResult oracle_chsh(double threshold, double decoherence, const ChshAngles& angles = {},
                       const QuadratureSpec& spec = {});

// Class probabilities along the polarizer-one scan of cfg.
std::vector<ClassProbabilities> oracle_scan(const ExperimentConfig& cfg,
                                            const QuadratureSpec& spec = {});

// (max − min)/(max + min) of P++ along the scan. Throws AllZeroCounts when
// max P++ is below spec.abs_tolerance.
double oracle_visibility(const ExperimentConfig& cfg, const QuadratureSpec& spec = {});

}  // namespace lhvsim::oracle
