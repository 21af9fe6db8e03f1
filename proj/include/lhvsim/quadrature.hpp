#pragma once

#include <functional>
#include <span>

namespace lhvsim {

struct QuadratureSpec {
  double abs_tolerance = 1e-4;
  int max_subdivisions = 256;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

// Globally adaptive Gauss–Kronrod (7/15) integration of f over [a, b].
// Interior breakpoints (discontinuities or kinks of f) seed the initial
// partition; they need not be sorted and may fall outside [a, b].
// Throws ToleranceNotMet if max_subdivisions bisections do not reach
// abs_tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec, std::span<const double> breakpoints = {});

}  // namespace lhvsim
