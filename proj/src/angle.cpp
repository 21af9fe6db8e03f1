#include "lhvsim/angle.hpp"

#include <cmath>
#include <stdexcept>

namespace lhvsim {

double canonicalize(double radians) {
  if (!std::isfinite(radians)) throw std::invalid_argument("angle must be finite");
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value plus 2π can round up to exactly 2π.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double degrees_to_radians(double deg) noexcept { return deg * (kPi / 180.0); }
double radians_to_degrees(double rad) noexcept { return rad * (180.0 / kPi); }

}  // namespace lhvsim
