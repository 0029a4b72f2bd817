#pragma once

// Limits of scaled graph Laplacians on one-dimensional charts with a
// non-uniform sampling density and a non-standard induced metric.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "geolap/angle.hpp"

namespace geolap {

/// A scalar test function with its first two derivatives.
struct TestFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
};

inline TestFunction make_test_function(const std::string& name) {
  if (name == "sin")
    return {name, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
            [](double t) { return -std::sin(t); }};
  if (name == "cos")
    return {name, [](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); },
            [](double t) { return -std::cos(t); }};
  if (name == "sin2")
    return {name, [](double t) { return std::sin(2 * t); }, [](double t) { return 2 * std::cos(2 * t); },
            [](double t) { return -4 * std::sin(2 * t); }};
  if (name == "const")
    return {name, [](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  throw std::invalid_argument("unknown test function '" + name + "'");
}

/// Limit of the scaled graph Laplacian (without the volume factor) at one
/// chart point, for induced metric g = speed^2 dt^2 and samples drawn with
/// density `density` with respect to dt:
///   P Lap_g f - 2 g(grad f, grad P),   P = density / speed,
/// with Lap_g = -(1/speed) d/dt ((1/speed) d/dt).
inline double nonuniform_limit_1d(double speed, double dspeed, double density, double ddensity, double df,
                                  double d2f) {
  if (!(speed > 0.0)) throw std::invalid_argument("nonuniform_limit_1d: speed must be positive");
  const double P = density / speed;
  const double dP = (ddensity * speed - density * dspeed) / (speed * speed);
  const double lap = -(d2f / (speed * speed) - df * dspeed / (speed * speed * speed));
  return P * lap - 2.0 * df * dP / (speed * speed);
}

struct WeightedL1Limit {
  /// -(2 pi)^2 (P^3 f'' + 3 P^2 P' f') with P = 1 / (2 pi (w1|sin| + w2|cos|)).
  double intrinsic = 0.0;
  /// sign(cos sin) (-w1|cos| + w2|sin|) / Q^4 f' + f'' / (3 Q^3), Q = w1|sin| + w2|cos|.
  double extrinsic = 0.0;
  /// intrinsic / extrinsic; analytically -3 / (2 pi).
  double ratio = 0.0;
};

/// Both forms of the limiting operator for the weighted l1 metric under
/// uniform sampling in angle. Rejects angles within `margin` of a quadrant
/// boundary.
inline WeightedL1Limit limiting_operator_weighted_l1(double w1, double w2, Angle theta, const TestFunction& fn,
                                                     double margin = 1e-3) {
  if (!(w1 > 0.0 && w2 > 0.0)) throw std::invalid_argument("limiting_operator_weighted_l1: weights must be positive");
  const double t = theta.radians();
  const double quarter = 0.5 * kPi;
  const double off = std::fmod(t, quarter);
  if (off < margin || quarter - off < margin)
    throw std::domain_error("limiting_operator_weighted_l1: angle " + std::to_string(t) +
                            " is at a quadrant boundary");
  const double s = std::sin(t), c = std::cos(t);
  const double Q = w1 * std::abs(s) + w2 * std::abs(c);
  const double dQ = w1 * (s > 0 ? 1.0 : -1.0) * c - w2 * (c > 0 ? 1.0 : -1.0) * s;
  const double P = 1.0 / (kTwoPi * Q);
  const double dP = -dQ / (kTwoPi * Q * Q);
  const double df = fn.df(t), d2f = fn.d2f(t);

  WeightedL1Limit out;
  out.intrinsic = -kTwoPi * kTwoPi * (P * P * P * d2f + 3.0 * P * P * dP * df);
  const double sign = (c * s > 0) ? 1.0 : -1.0;
  out.extrinsic = sign * (-w1 * std::abs(c) + w2 * std::abs(s)) / std::pow(Q, 4) * df + d2f / (3.0 * Q * Q * Q);
  out.ratio = out.intrinsic / out.extrinsic;
  return out;
}

}  // namespace geolap
