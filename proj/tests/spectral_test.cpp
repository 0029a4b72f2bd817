#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "geolap/spectral.hpp"

using namespace geolap;

namespace {

std::vector<double> random_angles(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<double> v(n);
  for (double& t : v) t = u(rng);
  return v;
}

}  // namespace

TEST(Spectral, EigenvaluesInUnitRangeAndTrivialPairFirst) {
  const auto g = build_weight_matrix(PointSet::from_scalars(random_angles(80, 1)), make_metric("chordal"), 0.3);
  const auto s = eigendecompose_normalized(g);
  EXPECT_GE(s.eigenvalues.minCoeff(), -1e-10);
  EXPECT_LE(s.eigenvalues.maxCoeff(), 2.0 + 1e-10);
  for (Eigen::Index k = 1; k < s.eigenvalues.size(); ++k) EXPECT_LE(s.eigenvalues(k - 1), s.eigenvalues(k));
  EXPECT_LT(std::abs(s.eigenvalues(0)), 1e-10);
  const Eigen::VectorXd v0 = s.eigenvectors.col(0);
  EXPECT_LT(v0.maxCoeff() - v0.minCoeff(), 1e-8 * v0.cwiseAbs().maxCoeff());
}

TEST(Spectral, EigenpairsSolveRandomWalkProblem) {
  const auto g = build_weight_matrix(PointSet::from_scalars(random_angles(60, 2)), make_metric("geodesic"), 0.2);
  const auto s = eigendecompose_normalized(g);
  const Eigen::MatrixXd L = normalized_laplacian(g);
  for (Eigen::Index k = 0; k < 5; ++k) {
    const Eigen::VectorXd v = s.eigenvectors.col(k);
    EXPECT_LT((L * v - s.eigenvalues(k) * v).norm(), 1e-9);
    EXPECT_NEAR(v.dot(g.degrees.cwiseProduct(v)), 1.0, 1e-10);
  }
}

TEST(Spectral, EmbeddingDimensionChecked) {
  const auto g = build_weight_matrix(PointSet::from_scalars(random_angles(10, 3)), make_metric("chordal"), 0.3);
  EXPECT_THROW(eigenmap_embedding(g, 0), std::invalid_argument);
  EXPECT_THROW(eigenmap_embedding(g, 10), std::invalid_argument);
  EXPECT_EQ(eigenmap_embedding(g, 9).cols(), 9);
}

TEST(AngularFidelity, PerfectAndReflected) {
  const auto theta = random_angles(100, 4);
  Eigen::MatrixXd emb(100, 2), flipped(100, 2);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const double t = theta[static_cast<std::size_t>(i)] + 0.8;  // rotated
    emb(i, 0) = 3.0 * std::cos(t);
    emb(i, 1) = 3.0 * std::sin(t);
    flipped(i, 0) = std::cos(t);
    flipped(i, 1) = -std::sin(t);
  }
  EXPECT_NEAR(angular_fidelity(emb, theta), 1.0, 1e-12);
  EXPECT_NEAR(angular_fidelity(flipped, theta), -1.0, 1e-12);
}

TEST(AngularFidelity, ShuffledEmbeddingScoresLow) {
  const auto theta = random_angles(400, 5);
  const auto other = random_angles(400, 6);
  Eigen::MatrixXd emb(400, 2);
  for (Eigen::Index i = 0; i < 400; ++i) {
    emb(i, 0) = std::cos(other[static_cast<std::size_t>(i)]);
    emb(i, 1) = std::sin(other[static_cast<std::size_t>(i)]);
  }
  EXPECT_LT(std::abs(angular_fidelity(emb, theta)), 0.2);
}

TEST(AngularFidelity, InvariantUnderRelabeling) {
  const auto theta = random_angles(200, 7);
  const auto m = make_metric("chordal");
  const auto emb = eigenmap_embedding(build_weight_matrix(PointSet::from_scalars(theta), m, 0.3), 2);
  const double base = angular_fidelity(emb, theta);

  std::vector<std::size_t> perm(200);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(8);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> permuted(200);
  for (std::size_t i = 0; i < 200; ++i) permuted[i] = theta[perm[i]];
  const auto emb2 = eigenmap_embedding(build_weight_matrix(PointSet::from_scalars(permuted), m, 0.3), 2);
  EXPECT_NEAR(std::abs(angular_fidelity(emb2, permuted)), std::abs(base), 1e-9);
}

TEST(AngularFidelity, RejectsBadInput) {
  Eigen::MatrixXd small(4, 2);
  small.setOnes();
  std::vector<double> t4(4, 0.0);
  EXPECT_THROW(angular_fidelity(small, t4), std::invalid_argument);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(10, 2);
  std::vector<double> t10(10, 0.0);
  EXPECT_THROW(angular_fidelity(zero, t10), std::domain_error);
  Eigen::MatrixXd three(10, 3);
  three.setOnes();
  EXPECT_THROW(angular_fidelity(three, t10), std::invalid_argument);
}
