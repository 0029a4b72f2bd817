#pragma once

// Closed-form distance oracles on the circle and on finite-dimensional
// parameter spaces. Circle oracles take angles in radians and canonicalize
// them first, so every oracle is invariant under adding 2*pi to an argument.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolap/angle.hpp"
#include "geolap/point_set.hpp"

namespace geolap {

namespace detail {

inline void require_radius(double r, const char* who) {
  if (!(r > 0.0 && r <= 1.0))
    throw std::invalid_argument(std::string(who) + ": radius must lie in (0, 1], got " + std::to_string(r));
}

inline void require_same_size(std::span<const double> a, std::span<const double> b, const char* who) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
}

}  // namespace detail

/// Euclidean distance between (cos t, sin t) and (cos p, sin p).
inline double chordal_distance(Angle theta, Angle phi) {
  return 2.0 * std::abs(std::sin(0.5 * (theta.radians() - phi.radians())));
}

/// Arc length between two angles on the unit circle.
inline double geodesic_distance_circle(Angle theta, Angle phi) { return angular_separation(theta, phi); }

/// Area of the intersection of two radius-r disks centered on the unit
/// circle at angular separation theta. Zero once the disks are disjoint.
inline double disk_intersection_area(double r, Angle theta) {
  detail::require_radius(r, "disk_intersection_area");
  const double s = std::sin(0.5 * angular_separation(theta, Angle(0.0)));
  if (s >= r) return 0.0;
  return 2.0 * (r * r * std::acos(s / r) - s * std::sqrt(r * r - s * s));
}

/// L1 distance between the rotating-ball densities (1/4r) 1_{B_r(cos t, sin t)}.
/// Saturates at pi*r/2 when the supports are disjoint.
inline double rotating_ball_l1(double r, Angle theta, Angle phi) {
  detail::require_radius(r, "rotating_ball_l1");
  const double s = std::sin(0.5 * angular_separation(theta, phi));
  if (s >= r) return 0.5 * kPi * r;
  const double q = s / r;
  return 0.5 * kPi * r - r * std::acos(q) + s * std::sqrt(1.0 - q * q);
}

/// sqrt(4r) times the L2 distance between rotating-ball densities. Its square
/// is exactly rotating_ball_l1.
inline double rotating_ball_l2(double r, Angle theta, Angle phi) {
  detail::require_radius(r, "rotating_ball_l2");
  return std::sqrt(rotating_ball_l1(r, theta, phi));
}

/// Weighted l1 norm of the chord: w1 |cos p - cos t| + w2 |sin p - sin t|.
inline double weighted_l1_circle(double w1, double w2, Angle theta, Angle phi) {
  if (!(w1 > 0.0 && w2 > 0.0)) throw std::invalid_argument("weighted_l1_circle: weights must be positive");
  const double t = theta.radians(), p = phi.radians();
  return w1 * std::abs(std::cos(t) - std::cos(p)) + w2 * std::abs(std::sin(t) - std::sin(p));
}

/// W2 distance between translates of a fixed reference measure.
inline double wasserstein_translation(std::span<const double> a, std::span<const double> b) {
  detail::require_same_size(a, b, "wasserstein_translation");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

/// W2 distance between coordinatewise dilations of a reference measure whose
/// j-th second moment is moments[j].
inline double wasserstein_dilation(std::span<const double> a, std::span<const double> b,
                                   std::span<const double> moments) {
  detail::require_same_size(a, b, "wasserstein_dilation");
  detail::require_same_size(a, moments, "wasserstein_dilation");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(a[j] > 0.0 && b[j] > 0.0))
      throw std::invalid_argument("wasserstein_dilation: dilation components must be positive");
    if (moments[j] < 0.0) throw std::invalid_argument("wasserstein_dilation: negative second moment");
    s += moments[j] * (a[j] - b[j]) * (a[j] - b[j]);
  }
  return std::sqrt(s);
}

/// |x^3 - y^3| on (-1, 1): a smooth embedding whose induced metric vanishes at 0.
inline double cubic_embedding_distance(double x, double y) {
  if (!(std::abs(x) < 1.0 && std::abs(y) < 1.0))
    throw std::invalid_argument("cubic_embedding_distance: inputs must lie in (-1, 1)");
  return std::abs(x * x * x - y * y * y);
}

/// Arc length of the metric induced by the weighted l1 norm, which is finite
/// only between angles in the same open quadrant. Inside a quadrant it agrees
/// with weighted_l1_circle because cos and sin are monotone there.
inline double weighted_l1_geodesic(double w1, double w2, Angle theta, Angle phi) {
  const auto quadrant = [](double t) { return static_cast<int>(std::floor(t / (0.5 * kPi))); };
  const double t = theta.radians(), p = phi.radians();
  if (quadrant(t) != quadrant(p)) return std::numeric_limits<double>::infinity();
  return weighted_l1_circle(w1, w2, theta, phi);
}

/// A named pairwise distance on chart coordinates.
struct MetricOracle {
  std::string name;
  std::map<std::string, double> params;
  std::string domain_note;
  /// Chart dimension the oracle expects; 0 accepts any dimension.
  std::size_t chart_dim = 1;
  std::function<double(PointView, PointView)> eval;

  double operator()(PointView x, PointView y) const { return eval(x, y); }
  double operator()(double x, double y) const { return eval(PointView(&x, 1), PointView(&y, 1)); }
};

namespace detail {

inline double param_or(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline double require_param(const std::map<std::string, double>& p, const std::string& key,
                            const std::string& metric) {
  auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument("metric '" + metric + "' requires parameter '" + key + "'");
  return it->second;
}

}  // namespace detail

/// Names accepted by make_metric.
inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "chordal",         "geodesic",    "rotating_ball_l1", "rotating_ball_l2", "weighted_l1",
      "weighted_l1_geodesic", "wasserstein_translation", "wasserstein_dilation", "cubic"};
  return names;
}

/// Builds an oracle by name. Parameters: r for the rotating-ball metrics,
/// w1/w2 for weighted l1, c1..cN for dilation moments.
inline MetricOracle make_metric(const std::string& name, const std::map<std::string, double>& params = {}) {
  MetricOracle m;
  m.name = name;
  if (name == "chordal") {
    m.eval = [](PointView x, PointView y) { return chordal_distance(Angle(x[0]), Angle(y[0])); };
  } else if (name == "geodesic") {
    m.eval = [](PointView x, PointView y) { return geodesic_distance_circle(Angle(x[0]), Angle(y[0])); };
  } else if (name == "rotating_ball_l1" || name == "rotating_ball_l2") {
    const double r = detail::param_or(params, "r", 0.75);
    detail::require_radius(r, name.c_str());
    m.params["r"] = r;
    if (name == "rotating_ball_l1")
      m.eval = [r](PointView x, PointView y) { return rotating_ball_l1(r, Angle(x[0]), Angle(y[0])); };
    else
      m.eval = [r](PointView x, PointView y) { return rotating_ball_l2(r, Angle(x[0]), Angle(y[0])); };
  } else if (name == "weighted_l1" || name == "weighted_l1_geodesic") {
    const double w1 = detail::param_or(params, "w1", 1.0);
    const double w2 = detail::param_or(params, "w2", 1.0);
    if (!(w1 > 0.0 && w2 > 0.0)) throw std::invalid_argument(name + ": weights must be positive");
    m.params["w1"] = w1;
    m.params["w2"] = w2;
    m.domain_note = "induced metric degenerates on the quadrant boundaries {0, pi/2, pi, 3pi/2}";
    if (name == "weighted_l1")
      m.eval = [w1, w2](PointView x, PointView y) { return weighted_l1_circle(w1, w2, Angle(x[0]), Angle(y[0])); };
    else
      m.eval = [w1, w2](PointView x, PointView y) {
        return weighted_l1_geodesic(w1, w2, Angle(x[0]), Angle(y[0]));
      };
  } else if (name == "wasserstein_translation") {
    m.chart_dim = 0;
    m.eval = [](PointView x, PointView y) { return wasserstein_translation(x, y); };
  } else if (name == "wasserstein_dilation") {
    std::vector<double> moments;
    for (std::size_t j = 1;; ++j) {
      auto it = params.find("c" + std::to_string(j));
      if (it == params.end()) break;
      moments.push_back(it->second);
      m.params[it->first] = it->second;
    }
    if (moments.empty()) throw std::invalid_argument("wasserstein_dilation requires moments c1..cN");
    m.chart_dim = moments.size();
    m.domain_note = "all dilation components strictly positive";
    m.eval = [moments](PointView x, PointView y) { return wasserstein_dilation(x, y, moments); };
  } else if (name == "cubic") {
    m.domain_note = "chart (-1, 1); induced metric vanishes at 0";
    m.eval = [](PointView x, PointView y) { return cubic_embedding_distance(x[0], y[0]); };
  } else {
    throw std::invalid_argument("unknown metric '" + name + "'");
  }
  return m;
}

}  // namespace geolap
