#pragma once

// The metric g_x = 1/2 Hess_x d^2(., x) induced by a distance oracle, and its
// second-order characterization along paths.

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geolap/metric_oracles.hpp"

namespace geolap {

/// Symmetric form on the tangent space at base_point, in the oracle's chart.
struct BilinearForm {
  Eigen::MatrixXd matrix;
  std::vector<double> base_point;
  /// Entrywise Richardson error estimate |G(h/2) - G(h)| / 3.
  Eigen::MatrixXd error_estimate;

  Eigen::Index dim() const { return matrix.rows(); }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }
};

namespace detail {

inline Eigen::MatrixXd half_hessian_of_squared_distance(const MetricOracle& metric, std::span<const double> x,
                                                        double h) {
  const std::size_t m = x.size();
  std::vector<double> y(x.begin(), x.end());
  auto sq = [&](const std::vector<double>& p) {
    const double d = metric(PointView(p), x);
    return d * d;
  };
  auto eval_shifted = [&](std::size_t i, double si, std::size_t j, double sj) {
    y.assign(x.begin(), x.end());
    y[i] += si;
    y[j] += sj;
    const double v = sq(y);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "induced_metric_hessian: non-finite d^2 at stencil offset (" << i << ": " << si << ", " << j << ": "
          << sj << ")";
      throw std::runtime_error(msg.str());
    }
    return v;
  };

  Eigen::MatrixXd H(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  const double f0 = 0.0;  // d(x, x) = 0
  for (std::size_t i = 0; i < m; ++i) {
    const double fp = eval_shifted(i, h, i, 0.0);
    const double fm = eval_shifted(i, -h, i, 0.0);
    H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = (fp - 2.0 * f0 + fm) / (h * h);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double fpp = eval_shifted(i, h, j, h);
      const double fpm = eval_shifted(i, h, j, -h);
      const double fmp = eval_shifted(i, -h, j, h);
      const double fmm = eval_shifted(i, -h, j, -h);
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return 0.5 * H;
}

}  // namespace detail

/// Central second differences of y -> d^2(y, x) at y = x, halved, then
/// Richardson-extrapolated over steps {h, h/2}.
inline BilinearForm induced_metric_hessian(const MetricOracle& metric, std::span<const double> chart_point,
                                           double step = 1e-3) {
  if (!(step > 0.0)) throw std::invalid_argument("induced_metric_hessian: step must be positive");
  if (chart_point.empty()) throw std::invalid_argument("induced_metric_hessian: empty chart point");
  const Eigen::MatrixXd coarse = detail::half_hessian_of_squared_distance(metric, chart_point, step);
  const Eigen::MatrixXd fine = detail::half_hessian_of_squared_distance(metric, chart_point, 0.5 * step);
  BilinearForm form;
  form.matrix = (4.0 * fine - coarse) / 3.0;
  form.matrix = 0.5 * (form.matrix + form.matrix.transpose()).eval();
  form.error_estimate = ((fine - coarse) / 3.0).cwiseAbs();
  form.base_point.assign(chart_point.begin(), chart_point.end());
  return form;
}

inline BilinearForm induced_metric_hessian(const MetricOracle& metric, double chart_point, double step = 1e-3) {
  return induced_metric_hessian(metric, std::span<const double>(&chart_point, 1), step);
}

enum class Definiteness { positive_definite, degenerate };

inline const char* to_string(Definiteness d) {
  return d == Definiteness::positive_definite ? "positive_definite" : "degenerate";
}

/// positive_definite iff the smallest eigenvalue exceeds tol.
inline Definiteness nondegeneracy_check(const BilinearForm& form, double tol = 1e-8) {
  return form.min_eigenvalue() > tol ? Definiteness::positive_definite : Definiteness::degenerate;
}

enum class LimitStatus {
  converged,  ///< ratio settles to a positive finite value
  divergent,  ///< ratio blows up: d^2 decays slower than t^2
  vanishing,  ///< ratio tends to 0: the induced form is degenerate along the path
};

inline const char* to_string(LimitStatus s) {
  switch (s) {
    case LimitStatus::converged: return "converged";
    case LimitStatus::divergent: return "divergent";
    case LimitStatus::vanishing: return "vanishing";
  }
  return "unknown";
}

struct SecondOrderLimit {
  struct Rung {
    double t;
    double ratio;  ///< d^2(gamma(t), gamma(0)) / t^2
  };
  std::vector<Rung> table;
  double limit = 0.0;
  /// d log(ratio) / d log(t) over the last two rungs; ~0 when convergent.
  double log_slope = 0.0;
  LimitStatus status = LimitStatus::converged;
};

using ChartPath = std::function<std::vector<double>(double)>;

/// Tabulates d^2(gamma(t), gamma(0)) / t^2 down a decreasing ladder of t and
/// extrapolates assuming ratio(t) = L + a t^2.
inline SecondOrderLimit second_order_limit(const MetricOracle& metric, const ChartPath& path,
                                           const std::vector<double>& t_ladder, double slope_tol = 0.25) {
  if (t_ladder.size() < 2) throw std::invalid_argument("second_order_limit: need at least two rungs");
  for (std::size_t k = 0; k < t_ladder.size(); ++k) {
    if (!(t_ladder[k] > 0.0)) throw std::invalid_argument("second_order_limit: rungs must be positive");
    if (k && !(t_ladder[k] < t_ladder[k - 1]))
      throw std::invalid_argument("second_order_limit: rungs must be strictly decreasing");
  }
  SecondOrderLimit out;
  const std::vector<double> origin = path(0.0);
  for (double t : t_ladder) {
    const std::vector<double> p = path(t);
    const double d = metric(PointView(p), PointView(origin));
    out.table.push_back({t, d * d / (t * t)});
  }
  const auto& a = out.table[out.table.size() - 2];
  const auto& b = out.table.back();
  const double t1 = a.t * a.t, t2 = b.t * b.t;
  out.limit = (t1 * b.ratio - t2 * a.ratio) / (t1 - t2);

  const double tiny = 1e-300;
  out.log_slope = std::log(std::max(b.ratio, tiny) / std::max(a.ratio, tiny)) / std::log(b.t / a.t);
  if (out.log_slope < -slope_tol) {
    out.status = LimitStatus::divergent;
  } else if (out.log_slope > slope_tol || b.ratio <= tiny) {
    out.status = LimitStatus::vanishing;
    out.limit = 0.0;
  } else {
    out.status = LimitStatus::converged;
  }
  return out;
}

}  // namespace geolap
