#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "geolap/metric_oracles.hpp"

using namespace geolap;

namespace {

// Independent route to the disk intersection: hit-or-miss over the bounding
// square of the first disk. Returns (estimate, standard error).
std::pair<double, double> monte_carlo_intersection(double r, double theta, std::size_t samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  const double cx2 = std::cos(theta), cy2 = std::sin(theta);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = 1.0 + u(rng), y = u(rng);
    const double dx1 = x - 1.0, dx2 = x - cx2, dy2 = y - cy2;
    if (dx1 * dx1 + y * y < r * r && dx2 * dx2 + dy2 * dy2 < r * r) ++hits;
  }
  const double box = 4.0 * r * r;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

}  // namespace

TEST(ChordalDistance, KnownValues) {
  EXPECT_NEAR(chordal_distance(Angle(kPi), Angle(0.0)), 2.0, 1e-15);
  EXPECT_NEAR(chordal_distance(Angle(0.5 * kPi), Angle(0.0)), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(chordal_distance(Angle(1.2), Angle(1.2)), 0.0);
}

TEST(GeodesicDistance, WrapsAround) {
  EXPECT_NEAR(geodesic_distance_circle(Angle(0.5 * kPi), Angle(0.0)), 0.5 * kPi, 1e-15);
  EXPECT_NEAR(geodesic_distance_circle(Angle(0.1), Angle(kTwoPi - 0.1)), 0.2, 1e-14);
  EXPECT_NEAR(geodesic_distance_circle(Angle(kPi), Angle(0.0)), kPi, 1e-15);
}

TEST(DiskIntersectionArea, CoincidentDisksGiveFullArea) {
  EXPECT_NEAR(disk_intersection_area(0.5, Angle(0.0)), kPi * 0.25, 1e-14);
}

TEST(DiskIntersectionArea, DisjointDisksGiveZero) {
  EXPECT_EQ(disk_intersection_area(0.25, Angle(2.0)), 0.0);
  // Tangent: half-separation sin(delta/2) equals r.
  EXPECT_EQ(disk_intersection_area(0.5, Angle(2.0 * std::asin(0.5))), 0.0);
}

TEST(DiskIntersectionArea, MatchesMonteCarlo) {
  for (double r : {0.3, 0.75, 1.0})
    for (double theta : {0.2, 0.9, 1.7}) {
      const auto [est, se] = monte_carlo_intersection(r, theta, 400000, 17);
      EXPECT_NEAR(disk_intersection_area(r, Angle(theta)), est, 4.0 * se + 1e-12) << "r=" << r << " theta=" << theta;
    }
}

TEST(DiskIntersectionArea, RejectsBadRadius) {
  EXPECT_THROW(disk_intersection_area(0.0, Angle(1.0)), std::invalid_argument);
  EXPECT_THROW(disk_intersection_area(1.5, Angle(1.0)), std::invalid_argument);
}

TEST(RotatingBallL1, IsSymmetricDifferenceOverFourR) {
  for (double r : {0.25, 0.6, 1.0})
    for (double theta : {0.1, 0.7, 1.9, 3.0}) {
      const double expected = (2.0 * kPi * r * r - 2.0 * disk_intersection_area(r, Angle(theta))) / (4.0 * r);
      EXPECT_NEAR(rotating_ball_l1(r, Angle(theta), Angle(0.0)), expected, 1e-13);
    }
}

TEST(RotatingBallL1, SaturatesBeyondTwiceArcsinR) {
  const double r = 0.5;
  const double edge = 2.0 * std::asin(r);
  EXPECT_DOUBLE_EQ(rotating_ball_l1(r, Angle(edge + 0.01), Angle(0.0)), 0.5 * kPi * r);
  EXPECT_DOUBLE_EQ(rotating_ball_l1(r, Angle(kPi), Angle(0.0)), 0.5 * kPi * r);
  EXPECT_LT(rotating_ball_l1(r, Angle(edge - 0.01), Angle(0.0)), 0.5 * kPi * r);
}

TEST(RotatingBallL1, FirstOrderAgreesWithArcLength) {
  const double t = 1e-4;
  EXPECT_NEAR(rotating_ball_l1(0.75, Angle(t), Angle(0.0)) / t, 1.0, 1e-6);
}

TEST(RotatingBallL2, SquareIsL1) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), rad(0.05, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double r = rad(rng);
    const Angle a(ang(rng)), b(ang(rng));
    const double l2 = rotating_ball_l2(r, a, b);
    EXPECT_NEAR(l2 * l2, rotating_ball_l1(r, a, b), 1e-14);
  }
}

TEST(WeightedL1, KnownValue) {
  // From (1, 0) to (0, 1): w1 * 1 + w2 * 1.
  EXPECT_NEAR(weighted_l1_circle(2.0, 3.0, Angle(0.0), Angle(0.5 * kPi)), 5.0, 1e-15);
  EXPECT_THROW(weighted_l1_circle(0.0, 1.0, Angle(0.0), Angle(1.0)), std::invalid_argument);
}

TEST(WeightedL1Geodesic, InfiniteAcrossQuadrants) {
  EXPECT_TRUE(std::isinf(weighted_l1_geodesic(1.0, 1.0, Angle(0.2), Angle(1.8))));
  EXPECT_DOUBLE_EQ(weighted_l1_geodesic(1.0, 2.0, Angle(0.2), Angle(1.3)),
                   weighted_l1_circle(1.0, 2.0, Angle(0.2), Angle(1.3)));
}

TEST(Wasserstein, TranslationIsEuclidean) {
  const double a[] = {0.0, 0.0}, b[] = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(wasserstein_translation(a, b), 5.0);
  const double c[] = {1.0};
  EXPECT_THROW(wasserstein_translation(a, c), std::invalid_argument);
}

TEST(Wasserstein, DilationWeightsBySecondMoments) {
  const double a[] = {1.0, 2.0}, b[] = {2.0, 4.0}, m[] = {4.0, 1.0};
  EXPECT_DOUBLE_EQ(wasserstein_dilation(a, b, m), std::sqrt(4.0 * 1.0 + 1.0 * 4.0));
  const double bad[] = {-1.0, 2.0};
  EXPECT_THROW(wasserstein_dilation(a, bad, m), std::invalid_argument);
}

TEST(CubicEmbedding, DomainIsOpenInterval) {
  EXPECT_NEAR(cubic_embedding_distance(0.5, -0.5), 0.25, 1e-15);
  EXPECT_THROW(cubic_embedding_distance(1.0, 0.0), std::invalid_argument);
}

TEST(MetricFactory, BuildsEveryListedName) {
  for (const auto& name : metric_names()) {
    std::map<std::string, double> params;
    if (name == "wasserstein_dilation") params = {{"c1", 1.0}, {"c2", 2.0}};
    EXPECT_NO_THROW(make_metric(name, params)) << name;
  }
  EXPECT_THROW(make_metric("manhattan"), std::invalid_argument);
  EXPECT_THROW(make_metric("rotating_ball_l1", {{"r", 1.5}}), std::invalid_argument);
  EXPECT_THROW(make_metric("wasserstein_dilation"), std::invalid_argument);
}

TEST(MetricFactory, PeriodicInAngle) {
  const auto m = make_metric("rotating_ball_l1", {{"r", 0.5}});
  EXPECT_NEAR(m(0.3, 1.1), m(0.3 + kTwoPi, 1.1 - 2 * kTwoPi), 1e-13);
}

class CircleMetricProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(CircleMetricProperties, SymmetryAndTriangleInequality) {
  const auto m = make_metric(GetParam(), {{"r", 0.6}, {"w1", 1.0}, {"w2", 2.5}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int k = 0; k < 1000; ++k) {
    const double a = ang(rng), b = ang(rng), c = ang(rng);
    const double ab = m(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(ab, m(b, a), 1e-14);
    EXPECT_LE(ab, m(a, c) + m(c, b) + 1e-12);
  }
  EXPECT_EQ(m(1.0, 1.0), 0.0);
}

INSTANTIATE_TEST_SUITE_P(AllCircleMetrics, CircleMetricProperties,
                         ::testing::Values("chordal", "geodesic", "rotating_ball_l1", "rotating_ball_l2",
                                           "weighted_l1"));

TEST(MetricProperties, ChordalNeverExceedsGeodesic) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int k = 0; k < 1000; ++k) {
    const Angle a(ang(rng)), b(ang(rng));
    EXPECT_LE(chordal_distance(a, b), geodesic_distance_circle(a, b) + 1e-15);
  }
}
