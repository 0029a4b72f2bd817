#pragma once

// Continuum operators behind the graph Laplacian and the non-asymptotic bias
// bound f(x) A_eps(x) - G_eps f(x) - (eps/2) Lap f(x) <= R1 + R2 + R3.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "geolap/angle.hpp"
#include "geolap/graph_laplacian.hpp"
#include "geolap/metric_oracles.hpp"

namespace geolap {

/// Surface area of the unit sphere S^{m-1} in R^m.
inline double sphere_area(std::size_t m) {
  if (m < 1) throw std::invalid_argument("sphere_area: m must be positive");
  const double h = 0.5 * static_cast<double>(m);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

struct CircleQuadrature {
  double A_eps = 0.0;
  double G_eps_f = 0.0;
  /// f(x) A_eps - G_eps f, summed directly to avoid cancellation.
  double bias = 0.0;
};

/// A_eps(x) and G_eps f(x) on the unit circle with its arc-length measure, by
/// the periodic trapezoidal rule on `nodes` equispaced angles.
template <class F>
CircleQuadrature quadrature_A_G(const MetricOracle& metric, F&& f, Angle x, double eps,
                                std::size_t nodes = std::size_t{1} << 14) {
  if (!(eps > 0.0)) throw std::invalid_argument("quadrature_A_G: bandwidth must be positive");
  if (nodes < (std::size_t{1} << 14)) throw std::invalid_argument("quadrature_A_G: need at least 2^14 nodes");
  const double xv = x.radians();
  const double fx = f(xv);
  const double dy = kTwoPi / static_cast<double>(nodes);
  const double norm = 1.0 / std::sqrt(2.0 * kPi * eps);
  CircleQuadrature q;
  for (std::size_t k = 0; k < nodes; ++k) {
    const double y = static_cast<double>(k) * dy;
    const double w = gaussian_kernel(metric(xv, y), eps);
    const double fy = f(y);
    q.A_eps += w;
    q.G_eps_f += w * fy;
    q.bias += w * (fx - fy);
  }
  q.A_eps *= norm * dy;
  q.G_eps_f *= norm * dy;
  q.bias *= norm * dy;
  return q;
}

/// int_a^inf exp(-y^2 / 2 eps) y^{m+1} dy = (1/2) (2 eps)^{(m+2)/2} Gamma((m+2)/2, a^2 / 2 eps).
inline double gaussian_tail_moment(double a, double eps, std::size_t m) {
  if (!(eps > 0.0) || a < 0.0) throw std::invalid_argument("gaussian_tail_moment: invalid arguments");
  const double k = 0.5 * static_cast<double>(m) + 1.0;
  return 0.5 * std::pow(2.0 * eps, k) * boost::math::tgamma(k, a * a / (2.0 * eps));
}

/// R1 = 2 vol(M \ B_r) exp(-beta^2 / 2 eps) |f|_inf / (2 pi eps)^{m/2}.
inline double bias_bound_R1(double eps, double vol_tail, double beta, double f_inf, std::size_t m) {
  return 2.0 * vol_tail * std::exp(-beta * beta / (2.0 * eps)) * f_inf /
         std::pow(2.0 * kPi * eps, 0.5 * static_cast<double>(m));
}

/// R3 = area(S^{m-1}) |Lap f(x)| / (2m) * tail(r) / (2 pi eps)^{m/2}. The
/// magnitude of Lap f is used so the bound stays nonnegative.
inline double bias_bound_R3(double eps, double r, double lap_f_x, std::size_t m) {
  return sphere_area(m) * std::abs(lap_f_x) / (2.0 * static_cast<double>(m)) * gaussian_tail_moment(r, eps, m) /
         std::pow(2.0 * kPi * eps, 0.5 * static_cast<double>(m));
}

struct BiasBoundInputs {
  double eps = 0.0;
  double eps0 = 0.0;
  /// Constant in r(x) = min(eps0, c * inj(x)); must lie in (0, 1).
  double c = 0.9;
  double injectivity_radius = kPi;
  double f_inf = 1.0;
  double lap_f_x = 0.0;
  std::size_t m = 1;
  /// vol(M \ B_R(x)) as a function of R.
  std::function<double(double)> vol_tail;
  /// beta(x, R) as a function of R.
  std::function<double(double)> beta;
};

struct BiasBoundReport {
  double eps = 0.0;
  double eps0 = 0.0;
  double r_x = 0.0;
  double beta_val = 0.0;
  double R1 = 0.0;
  double R3 = 0.0;
  /// f(x) A_eps - G_eps f - (eps/2) Lap f(x), when a quadrature was supplied.
  double quad_bias = 0.0;
  /// |quad_bias| - R1 - R3: what is left for the O(eps^{3/2}) term.
  double R2_residual = 0.0;
};

inline BiasBoundReport bias_bounds(const BiasBoundInputs& in) {
  if (!(in.eps > 0.0 && in.eps0 > 0.0)) throw std::invalid_argument("bias_bounds: eps and eps0 must be positive");
  if (!(in.c > 0.0 && in.c < 1.0)) throw std::invalid_argument("bias_bounds: c must lie in (0, 1)");
  if (!in.vol_tail || !in.beta) throw std::invalid_argument("bias_bounds: vol_tail and beta are required");
  BiasBoundReport rep;
  rep.eps = in.eps;
  rep.eps0 = in.eps0;
  rep.r_x = std::min(in.eps0, in.c * in.injectivity_radius);
  rep.beta_val = in.beta(rep.r_x);
  rep.R1 = bias_bound_R1(in.eps, in.vol_tail(rep.r_x), rep.beta_val, in.f_inf, in.m);
  rep.R3 = bias_bound_R3(in.eps, rep.r_x, in.lap_f_x, in.m);
  rep.R2_residual = -rep.R1 - rep.R3;
  return rep;
}

/// Attaches a measured bias to a report.
inline void attach_quadrature(BiasBoundReport& rep, double fA_minus_Gf, double lap_f_x) {
  rep.quad_bias = fA_minus_Gf - 0.5 * rep.eps * lap_f_x;
  rep.R2_residual = std::abs(rep.quad_bias) - rep.R1 - rep.R3;
}

/// int_{B_r} h(|v|) v^T A v dv = area(S^{m-1}) Tr(A) / m * int_0^r h(x) x^{m+1} dx.
inline double trace_integral(const Eigen::MatrixXd& A, const std::function<double(double)>& h, double r,
                             std::size_t m) {
  if (A.rows() != static_cast<Eigen::Index>(m) || A.cols() != static_cast<Eigen::Index>(m))
    throw std::invalid_argument("trace_integral: A must be m x m");
  if (!(r > 0.0)) throw std::invalid_argument("trace_integral: radius must be positive");
  const double trace = A.trace();
  if (trace == 0.0) return 0.0;
  const double mp1 = static_cast<double>(m) + 1.0;
  const double radial = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) { return h(x) * std::pow(x, mp1); }, 0.0, r, 15, 1e-13);
  return sphere_area(m) * trace / static_cast<double>(m) * radial;
}

}  // namespace geolap
