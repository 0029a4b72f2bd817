#pragma once

// End-to-end experiments. Each runner returns a typed result; the write_*
// functions turn results into the CSV/JSON files consumed by plotting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geolap/assumption_audit.hpp"
#include "geolap/bias_expansion.hpp"
#include "geolap/experiments/config.hpp"
#include "geolap/experiments/model.hpp"
#include "geolap/experiments/output.hpp"
#include "geolap/experiments/sampling.hpp"
#include "geolap/graph_laplacian.hpp"
#include "geolap/induced_metric.hpp"
#include "geolap/limiting_operator.hpp"
#include "geolap/spectral.hpp"

namespace geolap::experiments {

// ---------------------------------------------------------------------------
// Shared helpers

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

/// Fixed evaluation angles. Without a margin, `points` equispaced angles
/// offset by half a cell; with one, points/4 angles per quadrant spread over
/// [q pi/2 + margin, (q+1) pi/2 - margin].
inline std::vector<double> evaluation_grid(std::size_t points, double margin = 0.0) {
  if (points < 1) throw std::invalid_argument("evaluation_grid: need at least one point");
  std::vector<double> out;
  if (margin <= 0.0) {
    out = detail::circle_grid(points);
  } else {
    if (points % 4) throw std::invalid_argument("evaluation_grid: points must be a multiple of 4");
    for (int q = 0; q < 4; ++q) {
      const double lo = q * 0.5 * kPi + margin, hi = (q + 1) * 0.5 * kPi - margin;
      for (double t : detail::linspace(lo, hi, points / 4)) out.push_back(t);
    }
  }
  return out;
}

/// Draws angles according to cfg.sampler.
class AngleSampler {
 public:
  explicit AngleSampler(const ExperimentConfig& cfg) {
    if (cfg.sampler == "uniform") {
      density_ = make_density("uniform");
    } else {
      density_ = make_density(cfg.sampler.substr(std::string("density:").size()), cfg.metric_params);
      inverse_cdf_.emplace(density_);
    }
  }

  std::vector<double> operator()(std::size_t n, Rng& rng) const {
    return inverse_cdf_ ? inverse_cdf_->sample(n, rng) : sample_uniform_angles(n, rng);
  }
  const CircleDensity& density() const { return density_; }

 private:
  CircleDensity density_;
  std::optional<InverseCdfSampler> inverse_cdf_;
};

/// A metric under a display label, e.g. "rotating_ball_l1:r=0.25".
struct LabeledModel {
  std::string label;
  ManifoldModel model;
};

inline std::vector<LabeledModel> configured_models(const ExperimentConfig& cfg) {
  std::vector<LabeledModel> out;
  for (const auto& name : cfg.metrics) out.push_back({name, make_model(name, cfg.metric_params)});
  return out;
}

/// Limit of c_n L f at theta: the volume factor 2 pi times the weighted
/// Laplacian for the sampling density. Metrics without an induced metric are
/// compared with the round-circle Laplacian.
inline double pointwise_truth(const ManifoldModel& model, const CircleDensity& density, const TestFunction& fn,
                              double theta) {
  const double s = model.has_induced_metric ? model.speed(theta) : 1.0;
  const double ds = model.has_induced_metric ? model.dspeed(theta) : 0.0;
  return kTwoPi * nonuniform_limit_1d(s, ds, density.p(theta), density.dp(theta), fn.df(theta), fn.d2f(theta));
}

struct ScalarFit {
  double slope = 0.0;
  /// 1 - SS_res / SS_tot with SS_tot about the mean of y.
  double r2 = 0.0;
};

/// Least-squares y ~ slope * x through the origin.
inline ScalarFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_through_origin: size mismatch");
  double xx = 0.0, xy = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx += x[i] * x[i];
    xy += x[i] * y[i];
    mean += y[i];
  }
  if (!(xx > 0.0)) throw std::invalid_argument("fit_through_origin: regressor is identically zero");
  mean /= static_cast<double>(y.size());
  ScalarFit fit;
  fit.slope = xy / xx;
  double res = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    res += (y[i] - fit.slope * x[i]) * (y[i] - fit.slope * x[i]);
    tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r2 = tot > 0.0 ? 1.0 - res / tot : 0.0;
  return fit;
}

// ---------------------------------------------------------------------------
// Distance profiles

struct DistanceProfile {
  std::vector<double> theta;
  std::vector<std::string> labels;
  /// columns[k][i] = d_k(theta_i, 0).
  std::vector<std::vector<double>> columns;
};

namespace detail {

inline void require_circle(const LabeledModel& lm, const char* who) {
  if (!lm.model.on_circle)
    throw std::invalid_argument(std::string(who) + ": metric '" + lm.label + "' does not live on the circle");
}

inline DistanceProfile profile_for(const std::vector<LabeledModel>& models, std::size_t points) {
  DistanceProfile p;
  p.theta = linspace(-kPi, kPi, points);
  auto add = [&](const std::string& label, const MetricOracle& m) {
    p.labels.push_back(label);
    std::vector<double> col;
    for (double t : p.theta) col.push_back(m(t, 0.0));
    p.columns.push_back(std::move(col));
  };
  add("geodesic", make_metric("geodesic"));
  for (const auto& lm : models) {
    require_circle(lm, "distance-profile");
    if (lm.label != "geodesic") add(lm.label, lm.model.metric);
  }
  return p;
}

}  // namespace detail

inline DistanceProfile run_distance_profile(const ExperimentConfig& cfg) {
  validate(cfg);
  return detail::profile_for(configured_models(cfg), cfg.profile_points);
}

inline void write_distance_profile(std::ostream& os, const DistanceProfile& p, const char* kind = "distance-profile") {
  std::vector<std::string> cols{"theta"};
  cols.insert(cols.end(), p.labels.begin(), p.labels.end());
  CsvWriter w(os, kind, cols);
  for (std::size_t i = 0; i < p.theta.size(); ++i) {
    w << p.theta[i];
    for (const auto& c : p.columns) w << c[i];
    w.end_row();
  }
}

// ---------------------------------------------------------------------------
// Pointwise convergence

struct ConvergenceRecord {
  std::string metric;
  std::size_t n = 0;
  double eps_n = 0.0;
  double c_n = 0.0;
  double theta_eval = 0.0;
  double estimate = 0.0;
  double truth = 0.0;
  double abs_error = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
};

struct ConvergenceSummary {
  std::string metric;
  std::size_t n = 0;
  double eps_n = 0.0;
  double c_n = 0.0;
  /// Median abs error over the evaluation grid, one entry per trial.
  std::vector<double> trial_medians;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct PointwiseResult {
  std::vector<ConvergenceRecord> records;
  std::vector<ConvergenceSummary> summaries;

  const ConvergenceSummary& summary(const std::string& metric, std::size_t n) const {
    for (const auto& s : summaries)
      if (s.metric == metric && s.n == n) return s;
    throw std::out_of_range("no summary for " + metric + " at n = " + std::to_string(n));
  }
  /// Mean estimate per evaluation angle over trials, in grid order.
  std::vector<double> mean_estimates(const std::string& metric, std::size_t n) const {
    std::vector<double> sum;
    std::vector<std::size_t> count;
    std::vector<double> thetas;
    for (const auto& r : records) {
      if (r.metric != metric || r.n != n) continue;
      auto it = std::find(thetas.begin(), thetas.end(), r.theta_eval);
      const auto k = static_cast<std::size_t>(it - thetas.begin());
      if (it == thetas.end()) {
        thetas.push_back(r.theta_eval);
        sum.push_back(0.0);
        count.push_back(0);
      }
      sum[k] += r.estimate;
      ++count[k];
    }
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] /= static_cast<double>(count[k]);
    return sum;
  }
};

/// Runs the pointwise ladder for explicit models. All models see the same
/// samples for a given (n, trial).
inline PointwiseResult run_pointwise_models(const ExperimentConfig& cfg, const std::vector<LabeledModel>& models) {
  validate(cfg);
  const AngleSampler sampler(cfg);
  const TestFunction fn = make_test_function(cfg.test_function);
  const std::vector<double> grid = evaluation_grid(cfg.eval_points, cfg.eval_margin);
  for (const auto& lm : models) detail::require_circle(lm, "pointwise");

  std::vector<std::vector<double>> truth(models.size());
  for (std::size_t k = 0; k < models.size(); ++k)
    for (double t : grid) truth[k].push_back(pointwise_truth(models[k].model, sampler.density(), fn, t));

  PointwiseResult out;
  // medians[k][rung][trial]
  std::vector<std::vector<std::vector<double>>> medians(
      models.size(), std::vector<std::vector<double>>(cfg.n_ladder.size()));
  for (std::size_t rung = 0; rung < cfg.n_ladder.size(); ++rung) {
    const std::size_t n = cfg.n_ladder[rung];
    const double eps = epsilon_schedule({n, 1, cfg.alpha, kTwoPi});
    const double cn = scaling_constant(n, eps, 1, kTwoPi);
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t seed = trial_seed(cfg.seed, trial);
      Rng rng(seed);
      const PointSet pts = PointSet::from_scalars(sampler(n, rng));
      std::vector<double> f_samples(n);
      for (std::size_t j = 0; j < n; ++j) f_samples[j] = fn.f(pts[j][0]);
      for (std::size_t k = 0; k < models.size(); ++k) {
        std::vector<double> errors;
        for (std::size_t g = 0; g < grid.size(); ++g) {
          const double x = grid[g];
          ConvergenceRecord rec{models[k].label, n, eps, cn, x, 0.0, truth[k][g], 0.0, trial, seed};
          rec.estimate = cn * discrete_laplacian_apply(pts, models[k].model.metric, eps, f_samples, fn.f(x),
                                                       PointView(&x, 1));
          rec.abs_error = std::abs(rec.estimate - rec.truth);
          errors.push_back(rec.abs_error);
          out.records.push_back(std::move(rec));
        }
        medians[k][rung].push_back(median(errors));
      }
    }
  }
  for (std::size_t k = 0; k < models.size(); ++k) {
    for (std::size_t rung = 0; rung < cfg.n_ladder.size(); ++rung) {
      ConvergenceSummary s;
      s.metric = models[k].label;
      s.n = cfg.n_ladder[rung];
      s.eps_n = epsilon_schedule({s.n, 1, cfg.alpha, kTwoPi});
      s.c_n = scaling_constant(s.n, s.eps_n, 1, kTwoPi);
      s.trial_medians = medians[k][rung];
      s.median = median(s.trial_medians);
      s.min = *std::min_element(s.trial_medians.begin(), s.trial_medians.end());
      s.max = *std::max_element(s.trial_medians.begin(), s.trial_medians.end());
      out.summaries.push_back(std::move(s));
    }
  }
  return out;
}

inline PointwiseResult run_pointwise(const ExperimentConfig& cfg) {
  return run_pointwise_models(cfg, configured_models(cfg));
}

inline const std::vector<std::string>& convergence_columns() {
  static const std::vector<std::string> cols{"metric", "n",     "eps_n",     "c_n",   "theta_eval",
                                             "estimate", "truth", "abs_error", "trial", "seed"};
  return cols;
}

inline void write_convergence_records(std::ostream& os, const std::vector<ConvergenceRecord>& records) {
  CsvWriter w(os, "pointwise", convergence_columns());
  for (const auto& r : records) {
    w << r.metric << r.n << r.eps_n << r.c_n << r.theta_eval << r.estimate << r.truth << r.abs_error << r.trial
      << r.seed;
    w.end_row();
  }
}

inline void write_convergence_summary(std::ostream& os, const std::vector<ConvergenceSummary>& summaries,
                                      const char* kind = "pointwise-summary") {
  CsvWriter w(os, kind, {"metric", "n", "eps_n", "c_n", "median_abs_error", "min_trial_median", "max_trial_median",
                         "trials"});
  for (const auto& s : summaries) {
    w << s.metric << s.n << s.eps_n << s.c_n << s.median << s.min << s.max << s.trial_medians.size();
    w.end_row();
  }
}

/// Reads records written by write_convergence_records and checks that every
/// eps_n and c_n equals the schedule recomputed from n and alpha.
inline std::vector<ConvergenceRecord> read_convergence_records(std::istream& is, double alpha) {
  std::string line;
  if (!std::getline(is, line) || line.rfind(std::string("# ") + kCsvSchema, 0) != 0)
    throw std::runtime_error("convergence CSV: missing or unsupported schema line");
  if (!std::getline(is, line) || split_csv_line(line) != convergence_columns())
    throw std::runtime_error("convergence CSV: unexpected column header");
  std::vector<ConvergenceRecord> out;
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != convergence_columns().size())
      throw std::runtime_error("convergence CSV line " + std::to_string(lineno) + ": wrong field count");
    ConvergenceRecord r;
    r.metric = f[0];
    r.n = std::stoull(f[1]);
    r.eps_n = std::stod(f[2]);
    r.c_n = std::stod(f[3]);
    r.theta_eval = std::stod(f[4]);
    r.estimate = std::stod(f[5]);
    r.truth = std::stod(f[6]);
    r.abs_error = std::stod(f[7]);
    r.trial = std::stoull(f[8]);
    r.seed = std::stoull(f[9]);
    const double eps = epsilon_schedule({r.n, 1, alpha, kTwoPi});
    if (r.eps_n != eps || r.c_n != scaling_constant(r.n, eps, 1, kTwoPi))
      throw std::runtime_error("convergence CSV line " + std::to_string(lineno) +
                               ": eps_n/c_n disagree with the schedule");
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Eigenmaps

struct EigenmapTrial {
  std::string metric;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  double fidelity = 0.0;
};

struct EigenmapEmbedding {
  std::string metric;
  std::size_t n = 0;
  std::vector<double> theta;
  Eigen::MatrixXd coords;
};

struct EigenmapResult {
  std::vector<EigenmapTrial> trials;
  /// Trial 0 of every (metric, n).
  std::vector<EigenmapEmbedding> embeddings;
  std::vector<std::size_t> skipped_n;

  double mean_fidelity(const std::string& metric, std::size_t n) const {
    double s = 0.0;
    std::size_t c = 0;
    for (const auto& t : trials)
      if (t.metric == metric && t.n == n) {
        s += t.fidelity;
        ++c;
      }
    if (!c) throw std::out_of_range("no eigenmap trials for " + metric + " at n = " + std::to_string(n));
    return s / static_cast<double>(c);
  }
};

inline EigenmapResult run_eigenmap_models(const ExperimentConfig& cfg, const std::vector<LabeledModel>& models) {
  validate(cfg);
  const AngleSampler sampler(cfg);
  for (const auto& lm : models) detail::require_circle(lm, "eigenmap");
  EigenmapResult out;
  for (std::size_t n : cfg.n_ladder) {
    if (n < 16) throw std::invalid_argument("eigenmap: sample size must be at least 16");
    if (n > cfg.eigen_max_n) {
      out.skipped_n.push_back(n);
      continue;
    }
    const double eps = cfg.eps_override.value_or(epsilon_schedule({n, 1, cfg.alpha, kTwoPi}));
    for (std::size_t trial = 0; trial < cfg.eigen_trials; ++trial) {
      const std::uint64_t seed = trial_seed(cfg.seed, trial);
      Rng rng(seed);
      const std::vector<double> theta = sampler(n, rng);
      const PointSet pts = PointSet::from_scalars(theta);
      for (const auto& lm : models) {
        const KernelGraph g = build_weight_matrix(pts, lm.model.metric, eps);
        const Eigen::MatrixXd emb =
            eigenmap_embedding(eigendecompose_normalized(g), static_cast<Eigen::Index>(cfg.embedding_dim));
        out.trials.push_back({lm.label, n, trial, seed, eps, angular_fidelity(emb.leftCols(2), theta)});
        if (trial == 0) out.embeddings.push_back({lm.label, n, theta, emb.leftCols(2)});
      }
    }
  }
  return out;
}

inline EigenmapResult run_eigenmap(const ExperimentConfig& cfg) {
  return run_eigenmap_models(cfg, configured_models(cfg));
}

inline void write_eigenmap_embeddings(std::ostream& os, const EigenmapResult& r) {
  CsvWriter w(os, "eigenmap", {"metric", "n", "index", "true_theta", "v1", "v2"});
  for (const auto& e : r.embeddings)
    for (std::size_t i = 0; i < e.theta.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      w << e.metric << e.n << i << e.theta[i] << e.coords(ii, 0) << e.coords(ii, 1);
      w.end_row();
    }
}

inline void write_eigenmap_fidelity(std::ostream& os, const EigenmapResult& r,
                                    const char* kind = "eigenmap-fidelity") {
  CsvWriter w(os, kind, {"metric", "n", "trial", "seed", "eps", "fidelity"});
  for (const auto& t : r.trials) {
    w << t.metric << t.n << t.trial << t.seed << t.eps << t.fidelity;
    w.end_row();
  }
}

// ---------------------------------------------------------------------------
// Radius sweeps

struct RadiusProfile {
  /// One column per (metric, radius) after the geodesic reference.
  DistanceProfile profile;
  /// Profile strictly increasing in r at every theta with 0 < |theta| <= pi.
  bool strictly_monotone = true;
  std::vector<std::string> failures;
};

struct RadiusSweepResult {
  std::vector<double> radii;
  RadiusProfile profile;
  PointwiseResult pointwise;
  EigenmapResult eigenmap;
};

inline std::string radius_label(const std::string& metric, double r) { return metric + ":r=" + format_double(r); }

/// Rotating-ball models for every configured rotating-ball metric and radius,
/// metric-major with radii ascending.
inline std::vector<LabeledModel> radius_models(const ExperimentConfig& cfg) {
  std::vector<double> radii = cfg.radii;
  std::sort(radii.begin(), radii.end());
  std::vector<LabeledModel> out;
  for (const auto& name : cfg.metrics) {
    if (name != "rotating_ball_l1" && name != "rotating_ball_l2") continue;
    for (double r : radii) {
      auto params = cfg.metric_params;
      params["r"] = r;
      out.push_back({radius_label(name, r), make_model(name, params)});
    }
  }
  if (out.empty()) throw std::invalid_argument("radius-sweep: needs rotating_ball_l1 or rotating_ball_l2");
  return out;
}

inline RadiusProfile run_radius_profile(const ExperimentConfig& cfg) {
  validate(cfg);
  RadiusProfile out;
  out.profile = detail::profile_for(radius_models(cfg), cfg.profile_points);
  const std::size_t per_metric = cfg.radii.size();
  const auto& cols = out.profile.columns;
  for (std::size_t first = 1; first < cols.size(); first += per_metric) {
    for (std::size_t i = 0; i < out.profile.theta.size(); ++i) {
      const double t = out.profile.theta[i];
      if (t == 0.0) continue;
      for (std::size_t k = first + 1; k < first + per_metric; ++k) {
        if (!(cols[k - 1][i] < cols[k][i])) {
          out.strictly_monotone = false;
          out.failures.push_back(out.profile.labels[k] + " at theta=" + format_double(t));
        }
      }
    }
  }
  return out;
}

inline RadiusSweepResult run_radius_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  RadiusSweepResult out;
  out.radii = cfg.radii;
  std::sort(out.radii.begin(), out.radii.end());
  out.profile = run_radius_profile(cfg);
  const auto models = radius_models(cfg);
  out.pointwise = run_pointwise_models(cfg, models);
  out.eigenmap = run_eigenmap_models(cfg, models);
  return out;
}

// ---------------------------------------------------------------------------
// Bias bounds

struct BiasBoundsResult {
  std::string metric;
  double x = 0.0;
  std::string test_function;
  /// eps0-major: reports[i * eps_ladder.size() + j] is (eps0_ladder[i], eps_ladder[j]).
  std::vector<BiasBoundReport> reports;
  std::vector<double> eps_ladder;
  std::vector<double> eps0_ladder;
  /// R1 and R3 strictly increase each time eps0 steps down the ladder.
  bool eps0_monotone = true;
  /// |quad_bias| strictly decreases down the eps ladder.
  bool quad_bias_decreasing = true;
};

inline BiasBoundsResult run_bias_bounds(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.metrics.size() != 1) throw std::invalid_argument("bias-bounds: exactly one metric is required");
  const ManifoldModel model = make_model(cfg.metrics.front(), cfg.metric_params);
  if (!model.on_circle || !model.has_induced_metric || model.geodesic.name != "geodesic")
    throw std::invalid_argument("bias-bounds: metric must induce the round circle metric");
  const TestFunction fn = make_test_function(cfg.test_function);

  BiasBoundsResult out;
  out.metric = cfg.metrics.front();
  out.x = Angle::canonical(cfg.x);
  out.test_function = fn.name;
  out.eps_ladder = cfg.eps_ladder;
  out.eps0_ladder = cfg.eps0_ladder;
  const double lap_f_x = -fn.d2f(out.x);
  double f_inf = 0.0;
  for (double t : detail::circle_grid(4096)) f_inf = std::max(f_inf, std::abs(fn.f(t)));

  std::vector<double> quad(cfg.eps_ladder.size());
  for (std::size_t j = 0; j < cfg.eps_ladder.size(); ++j)
    quad[j] = quadrature_A_G(model.metric, fn.f, Angle(out.x), cfg.eps_ladder[j]).bias;

  for (double eps0 : cfg.eps0_ladder) {
    for (std::size_t j = 0; j < cfg.eps_ladder.size(); ++j) {
      BiasBoundInputs in;
      in.eps = cfg.eps_ladder[j];
      in.eps0 = eps0;
      in.c = cfg.c;
      in.injectivity_radius = model.injectivity_radius;
      in.f_inf = f_inf;
      in.lap_f_x = lap_f_x;
      in.vol_tail = [](double R) { return kTwoPi - 2.0 * R; };
      in.beta = [&](double R) { return beta_separation(model.metric, model.geodesic, Angle(out.x), R); };
      BiasBoundReport rep = bias_bounds(in);
      attach_quadrature(rep, quad[j], lap_f_x);
      out.reports.push_back(rep);
    }
  }
  const std::size_t ne = cfg.eps_ladder.size();
  for (std::size_t i = 1; i < cfg.eps0_ladder.size(); ++i)
    for (std::size_t j = 0; j < ne; ++j) {
      const auto& prev = out.reports[(i - 1) * ne + j];
      const auto& cur = out.reports[i * ne + j];
      if (!(cur.R1 > prev.R1 && cur.R3 > prev.R3)) out.eps0_monotone = false;
    }
  for (std::size_t j = 1; j < ne; ++j)
    if (!(std::abs(out.reports[j].quad_bias) < std::abs(out.reports[j - 1].quad_bias)))
      out.quad_bias_decreasing = false;
  return out;
}

inline nlohmann::json to_json(const BiasBoundsResult& r) {
  nlohmann::json reps = nlohmann::json::array();
  bool finite = true;
  for (const auto& rep : r.reports) {
    reps.push_back(to_json(rep));
    for (double v : {rep.R1, rep.R3, rep.quad_bias, rep.R2_residual, rep.beta_val}) finite = finite && std::isfinite(v);
  }
  return {{"experiment", "bias-bounds"},
          {"metric", r.metric},
          {"x", json_number(r.x)},
          {"test_function", r.test_function},
          {"reports", reps},
          {"checks", {{"eps0_monotone", r.eps0_monotone}, {"quad_bias_decreasing", r.quad_bias_decreasing}}},
          {"status", finite ? "ok" : "non-finite-values"}};
}

// ---------------------------------------------------------------------------
// Assumption audit

struct HessianSample {
  double point = 0.0;
  double g = 0.0;
  double error_estimate = 0.0;
  double min_eigenvalue = 0.0;
  Definiteness definiteness = Definiteness::positive_definite;
};

struct SecondOrderSample {
  double point = 0.0;
  SecondOrderLimit limit;
};

struct AuditResult {
  std::string metric;
  AssumptionAudit audit;
  std::vector<HessianSample> hessian;
  std::vector<SecondOrderSample> second_order;
  /// Set when the fourth-derivative probe left the chart domain.
  std::optional<std::string> kappa_error;
  AuditVerdict verdict = AuditVerdict::pass;

  int exit_code() const {
    switch (verdict) {
      case AuditVerdict::pass: return 0;
      case AuditVerdict::degenerate: return 2;
      case AuditVerdict::assumption1_violated: return 3;
    }
    return 1;
  }
};

inline const std::vector<double>& second_order_ladder() {
  static const std::vector<double> ladder{1e-1, 1e-2, 1e-3};
  return ladder;
}

inline AuditResult run_audit_model(const std::string& label, const ManifoldModel& model, std::size_t grid,
                                   double eps0) {
  AuditResult out;
  out.metric = label;
  out.audit = assumption2_audit(model.metric, model.geodesic, model.audit_grid(grid), eps0);

  bool degenerate = false;
  bool divergent = false;
  for (double p : model.hessian_grid) {
    const BilinearForm form = induced_metric_hessian(model.metric, p);
    HessianSample h{p, form.matrix(0, 0), form.error_estimate(0, 0), form.min_eigenvalue(),
                    nondegeneracy_check(form)};
    degenerate = degenerate || h.definiteness == Definiteness::degenerate;
    out.hessian.push_back(h);

    const ChartPath path = [p](double t) { return std::vector<double>{p + t}; };
    SecondOrderSample s{p, second_order_limit(model.metric, path, second_order_ladder())};
    divergent = divergent || s.limit.status == LimitStatus::divergent;
    out.second_order.push_back(std::move(s));
  }
  out.audit.degenerate = degenerate;

  try {
    const auto t_span = detail::linspace(-model.kappa_span, model.kappa_span, 9);
    out.audit.kappa_hat = fourth_derivative_bound(model.metric, model.flow, PointSet::from_scalars(model.kappa_points),
                                                  {{1.0}}, t_span);
  } catch (const std::domain_error& e) {
    out.kappa_error = e.what();
    out.audit.kappa_hat = std::numeric_limits<double>::quiet_NaN();
  }

  out.verdict = audit_verdict(out.audit);
  if (divergent) out.verdict = AuditVerdict::assumption1_violated;
  return out;
}

inline AuditResult run_audit(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.metrics.size() != 1) throw std::invalid_argument("audit: exactly one metric is required");
  return run_audit_model(cfg.metrics.front(), make_model(cfg.metrics.front(), cfg.metric_params), cfg.audit_grid,
                         cfg.audit_eps0);
}

inline nlohmann::json to_json(const AuditResult& r) {
  nlohmann::json hess = nlohmann::json::array();
  for (const auto& h : r.hessian)
    hess.push_back({{"point", json_number(h.point)},
                    {"g", json_number(h.g)},
                    {"error_estimate", json_number(h.error_estimate)},
                    {"min_eigenvalue", json_number(h.min_eigenvalue)},
                    {"definiteness", to_string(h.definiteness)}});
  nlohmann::json second = nlohmann::json::array();
  for (const auto& s : r.second_order) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& rung : s.limit.table) table.push_back({json_number(rung.t), json_number(rung.ratio)});
    second.push_back({{"point", json_number(s.point)},
                      {"limit", json_number(s.limit.limit)},
                      {"log_slope", json_number(s.limit.log_slope)},
                      {"status", to_string(s.limit.status)},
                      {"table", table}});
  }
  nlohmann::json j = {{"experiment", "audit"},
                      {"metric", r.metric},
                      {"audit", to_json(r.audit)},
                      {"hessian", hess},
                      {"second_order", second},
                      {"verdict", to_string(r.verdict)},
                      {"exit_code", r.exit_code()}};
  j["kappa_status"] = r.kappa_error ? *r.kappa_error : std::string("ok");
  j["status"] = r.kappa_error ? "partial" : "ok";
  return j;
}

// ---------------------------------------------------------------------------
// Dispatch

/// Runs cfg.experiment and writes its files under cfg.output_dir. Returns the
/// process exit status (non-zero only for audit verdicts).
inline int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  const std::string& dir = cfg.output_dir;
  switch (cfg.experiment) {
    case ExperimentKind::distance_profile: {
      auto os = open_output(dir, "distance_profile.csv");
      write_distance_profile(os, run_distance_profile(cfg));
      log << "wrote " << dir << "/distance_profile.csv\n";
      return 0;
    }
    case ExperimentKind::pointwise: {
      const auto r = run_pointwise(cfg);
      auto rec = open_output(dir, "pointwise_records.csv");
      write_convergence_records(rec, r.records);
      auto sum = open_output(dir, "pointwise_summary.csv");
      write_convergence_summary(sum, r.summaries);
      for (const auto& s : r.summaries)
        log << s.metric << " n=" << s.n << " median_abs_error=" << format_double(s.median) << '\n';
      return 0;
    }
    case ExperimentKind::eigenmap: {
      const auto r = run_eigenmap(cfg);
      auto emb = open_output(dir, "eigenmap_embedding.csv");
      write_eigenmap_embeddings(emb, r);
      auto fid = open_output(dir, "eigenmap_fidelity.csv");
      write_eigenmap_fidelity(fid, r);
      for (std::size_t n : r.skipped_n) log << "skipped n=" << n << " (above eigen_max_n)\n";
      for (const auto& t : r.trials)
        log << t.metric << " n=" << t.n << " trial=" << t.trial << " fidelity=" << format_double(t.fidelity) << '\n';
      return 0;
    }
    case ExperimentKind::radius_sweep: {
      const auto r = run_radius_sweep(cfg);
      auto prof = open_output(dir, "radius_profile.csv");
      write_distance_profile(prof, r.profile.profile, "radius-profile");
      auto pw = open_output(dir, "radius_pointwise.csv");
      write_convergence_summary(pw, r.pointwise.summaries, "radius-pointwise");
      auto fid = open_output(dir, "radius_eigenmap.csv");
      write_eigenmap_fidelity(fid, r.eigenmap, "radius-eigenmap");
      auto js = open_output(dir, "radius_sweep.json");
      write_json(js, {{"experiment", "radius-sweep"},
                      {"radii", r.radii},
                      {"strictly_monotone", r.profile.strictly_monotone},
                      {"monotonicity_failures", r.profile.failures},
                      {"status", r.profile.strictly_monotone ? "ok" : "monotonicity-violated"}});
      log << "profile strictly increasing in r: " << (r.profile.strictly_monotone ? "yes" : "no") << '\n';
      return 0;
    }
    case ExperimentKind::bias_bounds: {
      const auto r = run_bias_bounds(cfg);
      auto js = open_output(dir, "bias_bounds.json");
      write_json(js, to_json(r));
      log << "eps0 monotone: " << (r.eps0_monotone ? "yes" : "no")
          << ", quad bias decreasing: " << (r.quad_bias_decreasing ? "yes" : "no") << '\n';
      return 0;
    }
    case ExperimentKind::audit: {
      const auto r = run_audit(cfg);
      auto js = open_output(dir, "audit.json");
      write_json(js, to_json(r));
      log << r.metric << ": " << to_string(r.verdict) << '\n';
      return r.exit_code();
    }
  }
  return 1;
}

}  // namespace geolap::experiments
