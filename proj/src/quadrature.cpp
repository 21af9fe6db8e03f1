#include "lhvsim/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhvsim/errors.hpp"

namespace lhvsim {

ToleranceNotMet::ToleranceNotMet(double estimate, double tolerance)
    : Error("quadrature error estimate " + std::to_string(estimate) +
            " exceeds tolerance " + std::to_string(tolerance)) {}

void QuadratureSpec::validate() const {
  if (!(abs_tolerance > 0.0)) throw std::invalid_argument("abs_tolerance must be positive");
  if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
}

namespace {

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrod[i] * pair;
    if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec, std::span<const double> breakpoints) {
  spec.validate();
  if (!(a <= b)) throw std::invalid_argument("integration bounds must satisfy a <= b");
  if (a == b) return {};

  std::vector<double> edges{a};
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    panels.push(gauss_kronrod(f, edges[i], edges[i + 1]));
  }

  auto totals = [&panels] {
    // Summed from a copy so the queue order is untouched.
    auto copy = panels;
    double value = 0.0;
    double error = 0.0;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    return std::pair{value, error};
  };

  int subdivisions = 0;
  double error = totals().second;
  while (error > spec.abs_tolerance && subdivisions < spec.max_subdivisions) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    panels.push(left);
    panels.push(right);
    error += left.error + right.error - worst.error;
    ++subdivisions;
  }
  const auto [value, final_error] = totals();
  if (final_error > spec.abs_tolerance) throw ToleranceNotMet(final_error, spec.abs_tolerance);
  return {value, final_error, subdivisions};
}

}  // namespace lhvsim
