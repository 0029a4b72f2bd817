#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "geolap/angle.hpp"
#include "geolap/metric_oracles.hpp"
#include "geolap/point_set.hpp"

namespace geolap {

/// exp(-d^2 / (2 eps)).
inline double gaussian_kernel(double d, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("gaussian_kernel: bandwidth must be positive");
  if (!(d >= 0.0)) throw std::invalid_argument("gaussian_kernel: distance must be nonnegative");
  return std::exp(-d * d / (2.0 * eps));
}

/// exp(-d / (2 beta)). With the rotating-ball metrics, gaussian_kernel(l2, eps)
/// equals laplace_kernel(l1, eps) because l2^2 == l1.
inline double laplace_kernel(double d, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("laplace_kernel: bandwidth must be positive");
  if (!(d >= 0.0)) throw std::invalid_argument("laplace_kernel: distance must be nonnegative");
  return std::exp(-d / (2.0 * beta));
}

enum class KernelKind { gaussian, laplace };

inline double apply_kernel(KernelKind kind, double d, double eps) {
  return kind == KernelKind::gaussian ? gaussian_kernel(d, eps) : laplace_kernel(d, eps);
}

/// Dense kernel graph over a sample. W has unit diagonal and degrees include
/// the self-weight.
struct KernelGraph {
  PointSet points;
  double epsilon = 0.0;
  Eigen::MatrixXd weights;
  Eigen::VectorXd degrees;

  std::size_t size() const { return points.size(); }
};

namespace detail {

inline double checked_distance(const MetricOracle& metric, const PointSet& pts, std::size_t i, std::size_t j) {
  double d = 0.0;
  try {
    d = metric(pts[i], pts[j]);
  } catch (const std::exception& e) {
    throw std::runtime_error("metric '" + metric.name + "' failed at pair (" + std::to_string(i) + ", " +
                             std::to_string(j) + "): " + e.what());
  }
  if (!std::isfinite(d) || d < 0.0)
    throw std::runtime_error("metric '" + metric.name + "' returned invalid distance " + std::to_string(d) +
                             " at pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  return d;
}

}  // namespace detail

/// W_ij = k_eps(x_i, x_j). Each pair is evaluated once and mirrored, so W is
/// exactly symmetric.
inline KernelGraph build_weight_matrix(const PointSet& points, const MetricOracle& metric, double eps,
                                       KernelKind kernel = KernelKind::gaussian) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("build_weight_matrix: need at least two points");
  if (!(eps > 0.0)) throw std::invalid_argument("build_weight_matrix: bandwidth must be positive");
  if (metric.chart_dim != 0 && metric.chart_dim != points.dim())
    throw std::invalid_argument("build_weight_matrix: metric '" + metric.name + "' expects chart dimension " +
                                std::to_string(metric.chart_dim));

  KernelGraph g;
  g.points = points;
  g.epsilon = eps;
  g.weights.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    g.weights(ii, ii) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double w = apply_kernel(kernel, detail::checked_distance(metric, points, i, j), eps);
      g.weights(ii, jj) = w;
      g.weights(jj, ii) = w;
    }
  }
  g.degrees = g.weights.rowwise().sum();
  return g;
}

/// L = D - W.
inline Eigen::MatrixXd unnormalized_laplacian(const KernelGraph& g) {
  Eigen::MatrixXd L = -g.weights;
  L.diagonal() += g.degrees;
  return L;
}

/// I - D^{-1} W (random-walk normalization).
inline Eigen::MatrixXd normalized_laplacian(const KernelGraph& g) {
  if ((g.degrees.array() <= 0.0).any())
    throw std::invalid_argument("normalized_laplacian: degrees must be positive");
  Eigen::MatrixXd P = g.degrees.cwiseInverse().asDiagonal() * g.weights;
  Eigen::MatrixXd L = -P;
  L.diagonal().array() += 1.0;
  return L;
}

/// sum_j k_eps(x, x_j) (f(x) - f(x_j)) for an arbitrary evaluation point x,
/// given f at x and at every sample.
inline double discrete_laplacian_apply(const PointSet& points, const MetricOracle& metric, double eps,
                                       std::span<const double> f_samples, double f_at_x, PointView x,
                                       KernelKind kernel = KernelKind::gaussian) {
  if (!(eps > 0.0)) throw std::invalid_argument("discrete_laplacian_apply: bandwidth must be positive");
  if (f_samples.size() != points.size())
    throw std::invalid_argument("discrete_laplacian_apply: one function value per sample required");
  double s = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j)
    s += apply_kernel(kernel, metric(x, points[j]), eps) * (f_at_x - f_samples[j]);
  return s;
}

/// Same sum with f supplied as a callable on chart points.
template <class F>
double discrete_laplacian_apply(const PointSet& points, const MetricOracle& metric, double eps, F&& f,
                                PointView x, KernelKind kernel = KernelKind::gaussian) {
  if (!(eps > 0.0)) throw std::invalid_argument("discrete_laplacian_apply: bandwidth must be positive");
  const double fx = f(x);
  double s = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j)
    s += apply_kernel(kernel, metric(x, points[j]), eps) * (fx - f(points[j]));
  return s;
}

struct ScheduleParams {
  std::size_t n = 2;
  std::size_t m = 1;
  double alpha = 0.01;
  double vol = kTwoPi;
};

/// eps_n = 2 n^{-1/(m + 2 + alpha)}.
inline double epsilon_schedule(const ScheduleParams& p) {
  if (p.n < 1 || p.m < 1 || !(p.alpha > 0.0)) throw std::invalid_argument("epsilon_schedule: invalid parameters");
  return 2.0 * std::pow(static_cast<double>(p.n), -1.0 / (static_cast<double>(p.m) + 2.0 + p.alpha));
}

/// 2 vol / (eps (2 pi eps)^{m/2} n): multiplying L f by this makes the
/// uniform-sampling limit equal to the Laplace-Beltrami operator itself.
inline double scaling_constant(std::size_t n, double eps, std::size_t m, double vol) {
  if (n < 1 || !(eps > 0.0)) throw std::invalid_argument("scaling_constant: invalid parameters");
  return 2.0 * vol /
         (eps * std::pow(2.0 * kPi * eps, 0.5 * static_cast<double>(m)) * static_cast<double>(n));
}

/// Dense CSV dump, one matrix row per line.
inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& M) {
  const auto old_precision = os.precision(17);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ',';
      os << M(i, j);
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace geolap
