#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "geolap/experiments/runners.hpp"

using namespace geolap;
using namespace geolap::experiments;

namespace {

ExperimentConfig small_pointwise() {
  auto cfg = defaults_for(ExperimentKind::pointwise);
  cfg.metrics = {"chordal"};
  cfg.n_ladder = {64, 128};
  cfg.trials = 2;
  cfg.eval_points = 8;
  return cfg;
}

}  // namespace

TEST(Config, ParsesKeysListsAndComments) {
  const auto cfg = parse_config_string(
      "# comment\n"
      "experiment = radius-sweep\n"
      "metric = rotating_ball_l1, rotating_ball_l2  # trailing\n"
      "n_ladder = 128,512\n"
      "r = 0.5\n"
      "seed = 42\n"
      "sampler = density:cosine\n"
      "radii = 0.5, 1\n");
  EXPECT_EQ(cfg.experiment, ExperimentKind::radius_sweep);
  EXPECT_EQ(cfg.metrics, (std::vector<std::string>{"rotating_ball_l1", "rotating_ball_l2"}));
  EXPECT_EQ(cfg.n_ladder, (std::vector<std::size_t>{128, 512}));
  EXPECT_DOUBLE_EQ(cfg.r(), 0.5);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.radii, (std::vector<double>{0.5, 1.0}));
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config_string("bogus = 1"), std::invalid_argument);
  EXPECT_THROW(parse_config_string("seed"), std::invalid_argument);
  EXPECT_THROW(parse_config_string("seed = -3"), std::invalid_argument);
  EXPECT_THROW(parse_config_string("alpha = abc"), std::invalid_argument);
  EXPECT_THROW(parse_config_string("experiment = plot"), std::invalid_argument);
  EXPECT_THROW(validate(parse_config_string("n_ladder = 512, 256")), std::invalid_argument);
  EXPECT_THROW(validate(parse_config_string("trials = 0")), std::invalid_argument);
  EXPECT_THROW(validate(parse_config_string("sampler = gaussian")), std::invalid_argument);
  EXPECT_THROW(validate(parse_config_string("radii = 0.5, 1.5")), std::invalid_argument);
}

TEST(Sampling, TrialSeedsAreXorDerived) {
  EXPECT_EQ(trial_seed(20240601, 0), 20240601u);
  EXPECT_EQ(trial_seed(20240601, 3), 20240601u ^ 3u);
  Rng a(7), b(7);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.uniform01(), b.uniform01());
}

TEST(Sampling, InverseCdfReproducesDensityMoments) {
  const auto density = make_density("cosine");
  const InverseCdfSampler sampler(density);
  Rng rng(1);
  const auto x = sampler.sample(200000, rng);
  double c = 0.0;
  for (double t : x) {
    ASSERT_GE(t, 0.0);
    ASSERT_LT(t, kTwoPi);
    c += std::cos(t);
  }
  // E[cos] = int cos (1 + cos/2) / 2pi = 1/4.
  EXPECT_NEAR(c / static_cast<double>(x.size()), 0.25, 0.01);
}

TEST(Sampling, WeightedL1DensityIsNormalized) {
  const auto d = make_density("weighted_l1", {{"w1", 1.0}, {"w2", 3.0}});
  double s = 0.0;
  const std::size_t k = 100000;
  for (std::size_t i = 0; i < k; ++i) s += d.p((static_cast<double>(i) + 0.5) * kTwoPi / k);
  EXPECT_NEAR(s * kTwoPi / k, 1.0, 1e-6);
  EXPECT_THROW(make_density("lognormal"), std::invalid_argument);
}

TEST(EvaluationGrid, MarginKeepsAwayFromQuadrantBoundaries) {
  const auto g = evaluation_grid(32, 0.3);
  ASSERT_EQ(g.size(), 32u);
  for (double t : g) {
    const double off = std::fmod(t, 0.5 * kPi);
    EXPECT_GE(off, 0.3 - 1e-12);
    EXPECT_LE(off, 0.5 * kPi - 0.3 + 1e-12);
  }
  EXPECT_NEAR(evaluation_grid(4)[0], kPi / 4.0, 1e-15);
}

TEST(FitThroughOrigin, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8};
  const auto fit = fit_through_origin(x, y);
  EXPECT_DOUBLE_EQ(fit.slope, 2.0);
  EXPECT_DOUBLE_EQ(fit.r2, 1.0);
}

TEST(DistanceProfile, KnownRows) {
  auto cfg = defaults_for(ExperimentKind::distance_profile);
  cfg.metrics = {"chordal", "rotating_ball_l1", "geodesic"};
  cfg.profile_points = 5;  // -pi, -pi/2, 0, pi/2, pi
  const auto p = run_distance_profile(cfg);
  ASSERT_EQ(p.labels, (std::vector<std::string>{"geodesic", "chordal", "rotating_ball_l1"}));
  EXPECT_NEAR(p.columns[0][3], 0.5 * kPi, 1e-15);
  EXPECT_NEAR(p.columns[1][4], 2.0, 1e-15);
  EXPECT_NEAR(p.columns[2][4], 0.5 * kPi * 0.75, 1e-15);
  EXPECT_EQ(p.columns[2][2], 0.0);
  cfg.metrics = {"cubic"};
  EXPECT_THROW(run_distance_profile(cfg), std::invalid_argument);
}

TEST(Pointwise, ConstantFunctionEstimatesZero) {
  auto cfg = small_pointwise();
  cfg.test_function = "const";
  for (const auto& r : run_pointwise(cfg).records) {
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_EQ(r.truth, 0.0);
  }
}

TEST(Pointwise, RecordsSatisfyScheduleAndRoundTrip) {
  const auto cfg = small_pointwise();
  const auto res = run_pointwise(cfg);
  ASSERT_EQ(res.records.size(), 2u * 2u * 8u);
  std::stringstream ss;
  write_convergence_records(ss, res.records);
  const auto back = read_convergence_records(ss, cfg.alpha);
  ASSERT_EQ(back.size(), res.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].estimate, res.records[i].estimate);
    EXPECT_EQ(back[i].seed, res.records[i].seed);
  }
}

TEST(Pointwise, LoaderRejectsTamperedSchedule) {
  const auto cfg = small_pointwise();
  std::stringstream ss;
  write_convergence_records(ss, run_pointwise(cfg).records);
  std::istringstream wrong_alpha(ss.str());
  EXPECT_THROW(read_convergence_records(wrong_alpha, 0.5), std::runtime_error);
  std::istringstream no_header("metric,n\n");
  EXPECT_THROW(read_convergence_records(no_header, cfg.alpha), std::runtime_error);
}

TEST(Pointwise, IdenticalConfigGivesIdenticalBytes) {
  const auto cfg = small_pointwise();
  std::ostringstream a, b;
  write_convergence_records(a, run_pointwise(cfg).records);
  write_convergence_records(b, run_pointwise(cfg).records);
  EXPECT_EQ(a.str(), b.str());
  auto other = cfg;
  other.seed += 1;
  std::ostringstream c;
  write_convergence_records(c, run_pointwise(other).records);
  EXPECT_NE(a.str(), c.str());
}

TEST(Pointwise, DensitySamplerRegressesOntoWeightedLimit) {
  auto cfg = defaults_for(ExperimentKind::pointwise);
  cfg.metrics = {"chordal"};
  cfg.sampler = "density:cosine";
  cfg.n_ladder = {4096};
  cfg.trials = 4;
  cfg.eval_points = 32;
  const auto res = run_pointwise(cfg);
  const auto est = res.mean_estimates("chordal", 4096);
  std::vector<double> truth;
  for (std::size_t k = 0; k < 32; ++k) truth.push_back(res.records[k].truth);
  const auto fit = fit_through_origin(truth, est);
  EXPECT_GE(fit.r2, 0.9);
  EXPECT_NEAR(fit.slope, 1.0, 0.2);
}

TEST(Eigenmap, ChordalRecoversCircle) {
  auto cfg = defaults_for(ExperimentKind::eigenmap);
  cfg.metrics = {"chordal"};
  cfg.n_ladder = {256};
  cfg.eigen_trials = 1;
  const auto res = run_eigenmap(cfg);
  ASSERT_EQ(res.trials.size(), 1u);
  EXPECT_GT(std::abs(res.trials[0].fidelity), 0.99);
  ASSERT_EQ(res.embeddings.size(), 1u);
  EXPECT_EQ(res.embeddings[0].coords.rows(), 256);
  cfg.n_ladder = {8};
  EXPECT_THROW(run_eigenmap(cfg), std::invalid_argument);
}

TEST(Eigenmap, SkipsRungsAboveSolveLimit) {
  auto cfg = defaults_for(ExperimentKind::eigenmap);
  cfg.metrics = {"chordal"};
  cfg.n_ladder = {64, 128};
  cfg.eigen_trials = 1;
  cfg.eigen_max_n = 100;
  const auto res = run_eigenmap(cfg);
  EXPECT_EQ(res.skipped_n, (std::vector<std::size_t>{128}));
  EXPECT_EQ(res.trials.size(), 1u);
}

TEST(RadiusProfile, StrictlyIncreasingAndZeroAtOrigin) {
  auto cfg = defaults_for(ExperimentKind::radius_sweep);
  const auto p = run_radius_profile(cfg);
  EXPECT_TRUE(p.strictly_monotone) << (p.failures.empty() ? "" : p.failures.front());
  const std::size_t zero = cfg.profile_points / 2;
  ASSERT_EQ(p.profile.theta[zero], 0.0);
  for (const auto& col : p.profile.columns) EXPECT_EQ(col[zero], 0.0);
  // profile(r = 0.5, 0.8) < profile(r = 1.0, 0.8)
  EXPECT_LT(rotating_ball_l1(0.5, Angle(0.8), Angle(0.0)), rotating_ball_l1(1.0, Angle(0.8), Angle(0.0)));
}

TEST(BiasBoundsRunner, LaddersBehave) {
  auto cfg = defaults_for(ExperimentKind::bias_bounds);
  const auto res = run_bias_bounds(cfg);
  EXPECT_EQ(res.reports.size(), cfg.eps_ladder.size() * cfg.eps0_ladder.size());
  EXPECT_TRUE(res.eps0_monotone);
  EXPECT_TRUE(res.quad_bias_decreasing);
  const auto j = to_json(res);
  EXPECT_EQ(j["status"], "ok");

  cfg.test_function = "const";
  for (const auto& r : run_bias_bounds(cfg).reports) EXPECT_NEAR(r.quad_bias, 0.0, 1e-14);
  cfg.metrics = {"weighted_l1"};
  EXPECT_THROW(run_bias_bounds(cfg), std::invalid_argument);
}

TEST(AuditRunner, VerdictsAndExitCodes) {
  auto cfg = defaults_for(ExperimentKind::audit);
  cfg.audit_grid = 128;
  const auto chordal = run_audit(cfg);
  EXPECT_EQ(chordal.verdict, AuditVerdict::pass);
  EXPECT_EQ(chordal.exit_code(), 0);
  EXPECT_NEAR(chordal.audit.kappa_hat, 2.0, 1e-2);

  cfg.metrics = {"rotating_ball_l2"};
  EXPECT_EQ(run_audit(cfg).exit_code(), 3);
  cfg.metrics = {"cubic"};
  const auto cubic = run_audit(cfg);
  EXPECT_EQ(cubic.verdict, AuditVerdict::degenerate);
  EXPECT_EQ(cubic.exit_code(), 2);
  const auto j = to_json(cubic);
  EXPECT_EQ(j["verdict"], "degenerate");
  EXPECT_FALSE(j.dump().find("NaN") != std::string::npos);
}

TEST(Output, CsvQuotingAndRowWidth) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(split_csv_line("\"a,b\",c,\"d\"\"e\""), (std::vector<std::string>{"a,b", "c", "d\"e"}));
  std::ostringstream os;
  CsvWriter w(os, "demo", {"x", "y"});
  w << 1.5;
  EXPECT_THROW(w.end_row(), std::logic_error);
  EXPECT_EQ(os.str().substr(0, 20), "# geolap-csv v1 demo");
}

TEST(Output, NonFiniteBecomesNull) {
  EXPECT_TRUE(json_number(std::nan("")).is_null());
  EXPECT_TRUE(json_number(INFINITY).is_null());
  EXPECT_EQ(json_number(0.5).get<double>(), 0.5);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}
