#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geolap {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// An angle on the unit circle, stored as its representative in [0, 2*pi).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(canonical(radians)) {}

  double radians() const { return value_; }

  /// Representative of x modulo 2*pi in [0, 2*pi). Idempotent.
  static double canonical(double x) {
    double v = std::fmod(x, kTwoPi);
    if (v < 0.0) v += kTwoPi;
    // fmod of a tiny negative number can round up to exactly 2*pi.
    if (v >= kTwoPi) v = 0.0;
    return v;
  }

 private:
  double value_ = 0.0;
};

/// Unsigned separation of two angles along the circle, in [0, pi].
inline double angular_separation(Angle a, Angle b) {
  const double d = std::abs(a.radians() - b.radians());
  return std::min(d, kTwoPi - d);
}

}  // namespace geolap
