#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geolap/graph_laplacian.hpp"

namespace geolap {

/// Eigenpairs of the random-walk Laplacian I - D^{-1} W.
struct SpectralResult {
  /// Ascending.
  Eigen::VectorXd eigenvalues;
  /// Column k pairs with eigenvalues[k]. Columns are D-orthonormal
  /// (v^T D v = 1) with the largest-magnitude entry made positive.
  Eigen::MatrixXd eigenvectors;
  /// D^{-1/2}, the map from symmetric-conjugate eigenvectors to these.
  Eigen::VectorXd inv_sqrt_degrees;
};

/// Solves the symmetric problem for S = D^{-1/2} W D^{-1/2}; I - D^{-1}W is
/// similar to I - S, so the spectra coincide and v = D^{-1/2} u.
inline SpectralResult eigendecompose_normalized(const KernelGraph& g) {
  if ((g.degrees.array() <= 0.0).any())
    throw std::invalid_argument("eigendecompose_normalized: degrees must be positive");
  const Eigen::VectorXd s = g.degrees.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd S = s.asDiagonal() * g.weights * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose_normalized: symmetric eigensolver failed (n = " +
                             std::to_string(g.size()) + ", degree range [" +
                             std::to_string(g.degrees.minCoeff()) + ", " + std::to_string(g.degrees.maxCoeff()) +
                             "])");

  // Eigen returns ascending eigenvalues of S, i.e. descending 1 - mu.
  const Eigen::Index n = S.rows();
  SpectralResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.inv_sqrt_degrees = s;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.eigenvalues(k) = 1.0 - solver.eigenvalues()(src);
    Eigen::VectorXd v = s.cwiseProduct(solver.eigenvectors().col(src));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.eigenvectors.col(k) = v;
  }
  return out;
}

/// Row i holds (v1_i, ..., vl_i), skipping the trivial eigenvector.
inline Eigen::MatrixXd eigenmap_embedding(const SpectralResult& eig, Eigen::Index l) {
  const Eigen::Index n = eig.eigenvectors.rows();
  if (l < 1 || l > n - 1)
    throw std::invalid_argument("eigenmap_embedding: target dimension must lie in [1, n-1], got " +
                                std::to_string(l));
  return eig.eigenvectors.middleCols(1, l);
}

inline Eigen::MatrixXd eigenmap_embedding(const KernelGraph& g, Eigen::Index l) {
  if (l < 1 || l > static_cast<Eigen::Index>(g.size()) - 1)
    throw std::invalid_argument("eigenmap_embedding: target dimension must lie in [1, n-1], got " +
                                std::to_string(l));
  return eigenmap_embedding(eigendecompose_normalized(g), l);
}

namespace detail {

// Ranks mapped onto equally spaced angles 2 pi rank / n.
inline std::vector<double> rank_angles(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[order[r]] = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
  return out;
}

}  // namespace detail

/// Circular rank correlation between the polar angle of a 2-D embedding and
/// the true angles, maximized over rotations. Positive for
/// orientation-preserving agreement, negative for a reflection.
inline double angular_fidelity(const Eigen::MatrixXd& embedding, std::span<const double> truth) {
  const auto n = static_cast<std::size_t>(embedding.rows());
  if (embedding.cols() != 2) throw std::invalid_argument("angular_fidelity: embedding must have two columns");
  if (n < 8) throw std::invalid_argument("angular_fidelity: need at least 8 points");
  if (truth.size() != n) throw std::invalid_argument("angular_fidelity: one true angle per row required");
  if (embedding.rowwise().norm().maxCoeff() <= 1e-300)
    throw std::domain_error("angular_fidelity: degenerate embedding (zero radius)");

  std::vector<double> est(n), tru(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    est[i] = std::atan2(embedding(ii, 1), embedding(ii, 0));
    tru[i] = Angle::canonical(truth[i]);
  }
  const auto a = detail::rank_angles(est);
  const auto b = detail::rank_angles(tru);
  std::complex<double> same{0.0, 0.0}, flipped{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    same += std::polar(1.0, a[i] - b[i]);
    flipped += std::polar(1.0, a[i] + b[i]);
  }
  const double rp = std::abs(same) / static_cast<double>(n);
  const double rm = std::abs(flipped) / static_cast<double>(n);
  return rp >= rm ? rp : -rm;
}

}  // namespace geolap
