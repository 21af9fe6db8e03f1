#pragma once

#include <numbers>

namespace lhvsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Wraps a finite radian value into [0, 2π). Throws std::invalid_argument on NaN/inf.
double canonicalize(double radians);

double degrees_to_radians(double deg) noexcept;
double radians_to_degrees(double rad) noexcept;

// A polarization or analyzer angle, stored canonicalized in [0, 2π).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(canonicalize(radians)) {}

  static Angle from_degrees(double deg) { return Angle(degrees_to_radians(deg)); }

  double radians() const noexcept { return value_; }
  double degrees() const noexcept { return radians_to_degrees(value_); }

  friend Angle operator+(Angle a, double delta) { return Angle(a.value_ + delta); }
  friend Angle operator-(Angle a, double delta) { return Angle(a.value_ - delta); }
  friend bool operator==(Angle, Angle) = default;

 private:
  double value_ = 0.0;
};

}  // namespace lhvsim
