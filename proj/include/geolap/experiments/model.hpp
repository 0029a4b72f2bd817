#pragma once

// Everything an experiment needs to know about one metric on its manifold:
// the oracle, the geodesic distance of its induced metric, geodesics, and the
// induced line element on one-dimensional charts.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolap/assumption_audit.hpp"
#include "geolap/metric_oracles.hpp"
#include "geolap/point_set.hpp"

namespace geolap::experiments {

struct ManifoldModel {
  MetricOracle metric;
  /// Geodesic distance of the induced metric (round circle unless stated).
  MetricOracle geodesic;
  GeodesicFlow flow;
  /// sqrt(g) and its derivative on a one-dimensional chart.
  std::function<double(double)> speed = [](double) { return 1.0; };
  std::function<double(double)> dspeed = [](double) { return 0.0; };
  /// False when d^2 is not C^2 on the diagonal; limits are then reported
  /// against the round-circle Laplacian.
  bool has_induced_metric = true;
  bool on_circle = true;
  double injectivity_radius = kPi;
  /// Points for the induced-metric grid.
  std::vector<double> hessian_grid;
  /// Base point and the radius of the t-span for the fourth-derivative audit.
  std::vector<double> kappa_points;
  double kappa_span = 0.5;
  /// Chart points for the pairwise assumption audit.
  std::function<PointSet(std::size_t)> audit_grid;
};

namespace detail {

inline std::vector<double> circle_grid(std::size_t k) {
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = (static_cast<double>(i) + 0.5) * kTwoPi / static_cast<double>(k);
  return out;
}

inline std::vector<double> linspace(double a, double b, std::size_t k) {
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i)
    out[i] = k == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1);
  return out;
}

}  // namespace detail

inline ManifoldModel make_model(const std::string& name, const std::map<std::string, double>& params = {}) {
  ManifoldModel m;
  m.metric = make_metric(name, params);
  m.geodesic = make_metric("geodesic");
  m.flow = circle_geodesic_flow();
  m.hessian_grid = detail::circle_grid(16);
  m.kappa_points = detail::circle_grid(8);
  m.audit_grid = [](std::size_t k) { return PointSet::from_scalars(detail::circle_grid(k)); };

  if (name == "chordal" || name == "geodesic" || name == "rotating_ball_l1") {
    // Induced metric is the round one.
  } else if (name == "rotating_ball_l2") {
    m.has_induced_metric = false;
  } else if (name == "weighted_l1") {
    const double w1 = m.metric.params.at("w1"), w2 = m.metric.params.at("w2");
    m.geodesic = make_metric("weighted_l1_geodesic", m.metric.params);
    m.flow = weighted_l1_geodesic_flow(w1, w2);
    m.speed = [w1, w2](double t) { return w1 * std::abs(std::sin(t)) + w2 * std::abs(std::cos(t)); };
    m.dspeed = [w1, w2](double t) {
      const double s = std::sin(t), c = std::cos(t);
      return w1 * (s > 0 ? 1.0 : -1.0) * c - w2 * (c > 0 ? 1.0 : -1.0) * s;
    };
    m.kappa_points = {0.25 * kPi, 0.75 * kPi, 1.25 * kPi, 1.75 * kPi};
    m.kappa_span = 0.2;
    m.injectivity_radius = 0.5 * kPi;
  } else if (name == "cubic") {
    m.on_circle = false;
    // Induced geodesic distance of 9 x^4 dx^2 is |x^3 - y^3| itself.
    m.geodesic = m.metric;
    // Unit-speed geodesics: x^3 moves linearly in arc length.
    m.flow = [](std::span<const double> x, std::span<const double> v,
                double t) -> std::optional<std::vector<double>> {
      const double y = std::cbrt(x[0] * x[0] * x[0] + (v[0] >= 0.0 ? t : -t));
      if (!(std::abs(y) < 1.0)) return std::nullopt;
      return std::vector<double>{y};
    };
    m.speed = [](double x) { return 3.0 * x * x; };
    m.dspeed = [](double x) { return 6.0 * x; };
    m.hessian_grid = detail::linspace(-0.75, 0.75, 15);
    m.kappa_points = detail::linspace(-0.5, 0.5, 5);
    m.kappa_span = 0.2;
    m.audit_grid = [](std::size_t k) { return PointSet::from_scalars(detail::linspace(-0.9, 0.9, k)); };
  } else if (name == "wasserstein_translation") {
    m.on_circle = false;
    m.metric.chart_dim = 1;
    m.geodesic = m.metric;
    m.flow = euclidean_geodesic_flow();
    m.hessian_grid = detail::linspace(0.0, 1.0, 16);
    m.kappa_points = detail::linspace(0.25, 0.75, 5);
    m.kappa_span = 0.2;
    m.audit_grid = [](std::size_t k) { return PointSet::from_scalars(detail::linspace(0.0, 1.0, k)); };
  } else {
    throw std::invalid_argument("no manifold model for metric '" + name + "'");
  }
  return m;
}

}  // namespace geolap::experiments
