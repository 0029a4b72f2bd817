#pragma once

// Empirical checks of the regularity conditions that make graph Laplacians
// built from a metric oracle converge: first-order agreement with the geodesic
// distance (d <= d_g locally), the fourth-order gap d_g^2 - d^2 < K d_g^4, and
// the bound on the fourth derivative of h(t) = d^2(x, exp_x(t v)).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolap/angle.hpp"
#include "geolap/metric_oracles.hpp"
#include "geolap/point_set.hpp"

namespace geolap {

struct AssumptionAudit {
  /// max over audited pairs of (d_g^2 - d^2) / d_g^4, clamped below at 0.
  double K_hat = 0.0;
  double eps0 = 0.0;
  /// Empirical bound on |h''''|; 0 until fourth_derivative_bound has run.
  double kappa_hat = 0.0;
  /// Worst excess d - d_g over audited pairs (0 when d <= d_g everywhere).
  double max_violation = 0.0;
  bool degenerate = false;
  std::size_t pair_count = 0;
};

enum class AuditVerdict { pass, degenerate, assumption1_violated };

inline const char* to_string(AuditVerdict v) {
  switch (v) {
    case AuditVerdict::pass: return "pass";
    case AuditVerdict::degenerate: return "degenerate";
    case AuditVerdict::assumption1_violated: return "assumption-1-violated";
  }
  return "unknown";
}

/// Assumption-1 failures dominate; a degenerate induced form comes next.
inline AuditVerdict audit_verdict(const AssumptionAudit& a, double violation_tol = 1e-10) {
  if (a.max_violation > violation_tol) return AuditVerdict::assumption1_violated;
  if (a.degenerate) return AuditVerdict::degenerate;
  return AuditVerdict::pass;
}

/// Estimates K from all grid pairs with 0 < d_g < eps0 and records the worst
/// violation of d <= d_g.
inline AssumptionAudit assumption2_audit(const MetricOracle& metric, const MetricOracle& geodesic,
                                         const PointSet& x_grid, double eps0) {
  if (!(eps0 > 0.0)) throw std::invalid_argument("assumption2_audit: eps0 must be positive");
  AssumptionAudit out;
  out.eps0 = eps0;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    for (std::size_t j = i + 1; j < x_grid.size(); ++j) {
      const double dg = geodesic(x_grid[i], x_grid[j]);
      if (!(dg > 0.0 && dg < eps0)) continue;
      const double d = metric(x_grid[i], x_grid[j]);
      ++out.pair_count;
      const double dg2 = dg * dg;
      out.K_hat = std::max(out.K_hat, (dg2 - d * d) / (dg2 * dg2));
      out.max_violation = std::max(out.max_violation, d - dg);
    }
  }
  if (out.pair_count == 0) throw std::invalid_argument("assumption2_audit: no grid pairs with 0 < d_g < eps0");
  return out;
}

/// Unit-speed geodesic t -> exp_x(t v) in the chart; nullopt once it leaves
/// the chart domain.
using GeodesicFlow =
    std::function<std::optional<std::vector<double>>(std::span<const double>, std::span<const double>, double)>;

/// Straight lines: the geodesics of a flat chart.
inline GeodesicFlow euclidean_geodesic_flow() {
  return [](std::span<const double> x, std::span<const double> v, double t) -> std::optional<std::vector<double>> {
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += t * v[k] / norm;
    return out;
  };
}

/// Arc-length parametrization of the round circle.
inline GeodesicFlow circle_geodesic_flow() {
  return [](std::span<const double> x, std::span<const double> v, double t) -> std::optional<std::vector<double>> {
    return std::vector<double>{Angle::canonical(x[0] + (v[0] >= 0.0 ? t : -t))};
  };
}

/// Geodesics of the metric induced by the weighted l1 norm: the angle path
/// reparametrized by its length sum w1 |dcos| + w2 |dsin|, valid inside one
/// open quadrant.
inline GeodesicFlow weighted_l1_geodesic_flow(double w1, double w2) {
  return [w1, w2](std::span<const double> x, std::span<const double> v,
                  double t) -> std::optional<std::vector<double>> {
    const double x0 = Angle::canonical(x[0]);
    const double lo = std::floor(x0 / (0.5 * kPi)) * 0.5 * kPi;
    const double hi = lo + 0.5 * kPi;
    const double s = v[0] >= 0.0 ? t : -t;
    // Signed length from x0 to theta; strictly increasing on (lo, hi).
    auto length = [&](double theta) {
      const double d = w1 * std::abs(std::cos(theta) - std::cos(x0)) + w2 * std::abs(std::sin(theta) - std::sin(x0));
      return theta >= x0 ? d : -d;
    };
    auto speed = [&](double theta) { return w1 * std::abs(std::sin(theta)) + w2 * std::abs(std::cos(theta)); };
    if (s >= length(hi) || s <= length(lo)) return std::nullopt;
    double a = lo, b = hi, theta = x0 + s / speed(x0);
    if (!(theta > a && theta < b)) theta = 0.5 * (a + b);
    for (int it = 0; it < 100; ++it) {
      const double r = length(theta) - s;
      if (r > 0.0) b = theta; else a = theta;
      double next = theta - r / speed(theta);
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(next - theta) < 1e-15) { theta = next; break; }
      theta = next;
    }
    return std::vector<double>{theta};
  };
}

/// max |h''''(t)| over the grid, using the five-point central stencil with
/// spacing `stencil`, where h(t) = d^2(x, exp_x(t v)). The fourth-order gap
/// then holds with K = kappa / 24.
inline double fourth_derivative_bound(const MetricOracle& metric, const GeodesicFlow& flow, const PointSet& x_grid,
                                      const std::vector<std::vector<double>>& v_grid,
                                      const std::vector<double>& t_span, double stencil = 1e-2) {
  if (!(stencil > 0.0)) throw std::invalid_argument("fourth_derivative_bound: stencil must be positive");
  double kappa = 0.0;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const auto x = x_grid[i];
    for (const auto& v : v_grid) {
      auto h = [&](double t) {
        const auto y = flow(x, v, t);
        if (!y) throw std::domain_error("fourth_derivative_bound: stencil leaves the chart domain at t = " +
                                        std::to_string(t));
        const double d = metric(x, PointView(*y));
        return d * d;
      };
      for (double t : t_span) {
        const double d4 = (h(t - 2 * stencil) - 4 * h(t - stencil) + 6 * h(t) - 4 * h(t + stencil) +
                           h(t + 2 * stencil)) /
                          std::pow(stencil, 4);
        kappa = std::max(kappa, std::abs(d4));
      }
    }
  }
  return kappa;
}

/// inf { d(y, x) : d_g(y, x) >= R } over the circle. A uniform grid locates
/// the candidates; boundary crossings of d_g = R are refined by bisection and
/// interior minima by golden-section search.
inline double beta_separation(const MetricOracle& metric, const MetricOracle& geodesic, Angle x, double R,
                              std::size_t grid = 4096) {
  if (!(R > 0.0)) throw std::invalid_argument("beta_separation: R must be positive");
  if (grid < 8) throw std::invalid_argument("beta_separation: grid too coarse");
  const double xv = x.radians();
  auto dist = [&](double y) { return metric(y, xv); };
  auto feasible = [&](double y) { return geodesic(y, xv) >= R; };
  const double h = kTwoPi / static_cast<double>(grid);

  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < grid; ++k) {
    const double y0 = xv + static_cast<double>(k) * h;
    const double y1 = y0 + h;
    const bool f0 = feasible(y0), f1 = feasible(y1);
    if (f0) {
      any = true;
      best = std::min(best, dist(y0));
    }
    if (f0 != f1) {
      // Shrink onto the crossing while keeping one endpoint feasible.
      double a = y0, b = y1;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        if (feasible(mid) == f0) a = mid; else b = mid;
      }
      const double yf = f0 ? a : b;
      if (feasible(yf)) {
        any = true;
        best = std::min(best, dist(yf));
      }
    }
  }
  if (!any) throw std::invalid_argument("beta_separation: no point with d_g >= R");

  // Golden-section refinement around interior grid minima.
  for (std::size_t k = 1; k + 1 < grid; ++k) {
    const double ym = xv + static_cast<double>(k) * h;
    if (!(feasible(ym - h) && feasible(ym) && feasible(ym + h))) continue;
    const double dm = dist(ym);
    if (!(dm <= dist(ym - h) && dm <= dist(ym + h))) continue;
    double a = ym - h, b = ym + h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 80; ++it) {
      if (dist(c) < dist(d)) b = d; else a = c;
      c = b - g * (b - a);
      d = a + g * (b - a);
    }
    best = std::min(best, dist(0.5 * (a + b)));
  }
  return best;
}

}  // namespace geolap
