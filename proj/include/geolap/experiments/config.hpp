#pragma once

// Flat key = value experiment configuration.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolap/angle.hpp"

namespace geolap::experiments {

enum class ExperimentKind { distance_profile, pointwise, eigenmap, radius_sweep, bias_bounds, audit };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::distance_profile: return "distance-profile";
    case ExperimentKind::pointwise: return "pointwise";
    case ExperimentKind::eigenmap: return "eigenmap";
    case ExperimentKind::radius_sweep: return "radius-sweep";
    case ExperimentKind::bias_bounds: return "bias-bounds";
    case ExperimentKind::audit: return "audit";
  }
  return "unknown";
}

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::distance_profile, ExperimentKind::pointwise, ExperimentKind::eigenmap,
                 ExperimentKind::radius_sweep, ExperimentKind::bias_bounds, ExperimentKind::audit})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown experiment '" + s + "'");
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::pointwise;
  /// One or more metric names; runs compare them on shared samples.
  std::vector<std::string> metrics{"chordal"};
  /// Metric parameters: r, w1, w2, c1..cN.
  std::map<std::string, double> metric_params{{"r", 0.75}};
  std::vector<std::size_t> n_ladder{256, 1024, 4096};
  double alpha = 0.01;
  std::uint64_t seed = 20240601;
  std::size_t trials = 10;
  std::string test_function = "sin";
  std::string output_dir = "out";
  /// "uniform" or "density:<name>".
  std::string sampler = "uniform";

  std::size_t eval_points = 64;
  /// When positive, evaluation angles are spread over each quadrant at least
  /// this far from its boundaries.
  double eval_margin = 0.0;
  std::optional<double> eps_override;
  std::size_t embedding_dim = 2;
  std::size_t eigen_trials = 3;
  /// Eigenmap rungs above this size are skipped (dense solves are O(n^3)).
  std::size_t eigen_max_n = 2048;
  std::size_t profile_points = 361;
  std::vector<double> radii{0.25, 0.5, 0.75, 1.0};
  std::vector<double> eps_ladder{0.1, 0.05, 0.025};
  std::vector<double> eps0_ladder{1.0, 0.5};
  double x = kPi / 3.0;
  double c = 0.9;
  std::size_t audit_grid = 256;
  double audit_eps0 = 1.0;

  double r() const {
    auto it = metric_params.find("r");
    return it == metric_params.end() ? 0.75 : it->second;
  }
};

/// Starting point for each experiment before a config file or flags apply.
inline ExperimentConfig defaults_for(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::distance_profile:
      cfg.metrics = {"chordal", "rotating_ball_l1", "rotating_ball_l2"};
      break;
    case ExperimentKind::pointwise:
      cfg.metrics = {"chordal", "rotating_ball_l1", "rotating_ball_l2"};
      break;
    case ExperimentKind::eigenmap:
      cfg.metrics = {"chordal", "rotating_ball_l1"};
      cfg.n_ladder = {128, 512, 1024};
      break;
    case ExperimentKind::radius_sweep:
      cfg.metrics = {"rotating_ball_l1"};
      cfg.n_ladder = {256, 1024};
      break;
    case ExperimentKind::bias_bounds:
    case ExperimentKind::audit:
      cfg.metrics = {"chordal"};
      break;
  }
  return cfg;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  std::uint64_t out = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty())
    throw std::invalid_argument("config: '" + key + "' expects a nonnegative integer, got '" + v + "'");
  return out;
}

}  // namespace detail

/// Applies one key/value pair. Unknown keys are errors.
inline void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "experiment") {
    cfg.experiment = parse_experiment_kind(value);
  } else if (key == "metric" || key == "metrics") {
    cfg.metrics = split_list(value);
  } else if (key == "r" || key == "w1" || key == "w2" || (key.size() > 1 && key[0] == 'c' &&
                                                             key.find_first_not_of("0123456789", 1) == std::string::npos)) {
    cfg.metric_params[key] = parse_double(key, value);
  } else if (key == "n_ladder" || key == "n") {
    cfg.n_ladder.clear();
    for (const auto& s : split_list(value)) cfg.n_ladder.push_back(parse_uint(key, s));
  } else if (key == "alpha") {
    cfg.alpha = parse_double(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_uint(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_uint(key, value);
  } else if (key == "test_function") {
    cfg.test_function = value;
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "sampler") {
    cfg.sampler = value;
  } else if (key == "eval_points") {
    cfg.eval_points = parse_uint(key, value);
  } else if (key == "eval_margin") {
    cfg.eval_margin = parse_double(key, value);
  } else if (key == "eps") {
    cfg.eps_override = parse_double(key, value);
  } else if (key == "embedding_dim") {
    cfg.embedding_dim = parse_uint(key, value);
  } else if (key == "eigen_trials") {
    cfg.eigen_trials = parse_uint(key, value);
  } else if (key == "eigen_max_n") {
    cfg.eigen_max_n = parse_uint(key, value);
  } else if (key == "profile_points") {
    cfg.profile_points = parse_uint(key, value);
  } else if (key == "radii") {
    cfg.radii.clear();
    for (const auto& s : split_list(value)) cfg.radii.push_back(parse_double(key, s));
  } else if (key == "eps_ladder") {
    cfg.eps_ladder.clear();
    for (const auto& s : split_list(value)) cfg.eps_ladder.push_back(parse_double(key, s));
  } else if (key == "eps0_ladder") {
    cfg.eps0_ladder.clear();
    for (const auto& s : split_list(value)) cfg.eps0_ladder.push_back(parse_double(key, s));
  } else if (key == "x") {
    cfg.x = parse_double(key, value);
  } else if (key == "c") {
    cfg.c = parse_double(key, value);
  } else if (key == "audit_grid") {
    cfg.audit_grid = parse_uint(key, value);
  } else if (key == "audit_eps0") {
    cfg.audit_eps0 = parse_double(key, value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

/// Throws on any violated invariant.
inline void validate(const ExperimentConfig& cfg) {
  if (cfg.metrics.empty()) throw std::invalid_argument("config: at least one metric is required");
  if (cfg.n_ladder.empty()) throw std::invalid_argument("config: n_ladder must not be empty");
  for (std::size_t k = 0; k < cfg.n_ladder.size(); ++k) {
    if (cfg.n_ladder[k] < 2) throw std::invalid_argument("config: sample sizes must be at least 2");
    if (k && cfg.n_ladder[k] <= cfg.n_ladder[k - 1])
      throw std::invalid_argument("config: n_ladder must be strictly ascending");
  }
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  if (!(cfg.alpha > 0.0)) throw std::invalid_argument("config: alpha must be positive");
  if (cfg.eps_override && !(*cfg.eps_override > 0.0)) throw std::invalid_argument("config: eps must be positive");
  if (cfg.eval_points < 1) throw std::invalid_argument("config: eval_points must be positive");
  if (cfg.eval_margin < 0.0 || cfg.eval_margin >= 0.25 * kPi)
    throw std::invalid_argument("config: eval_margin must lie in [0, pi/4)");
  if (cfg.eval_margin > 0.0 && cfg.eval_points % 4 != 0)
    throw std::invalid_argument("config: eval_points must be a multiple of 4 when eval_margin is set");
  for (double r : cfg.radii)
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("config: radii must lie in (0, 1]");
  if (cfg.sampler != "uniform" && cfg.sampler.rfind("density:", 0) != 0)
    throw std::invalid_argument("config: sampler must be 'uniform' or 'density:<name>'");
  if (!(cfg.c > 0.0 && cfg.c < 1.0)) throw std::invalid_argument("config: c must lie in (0, 1)");
  auto strictly_decreasing = [](const std::vector<double>& v) {
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!(v[k] > 0.0) || (k && !(v[k] < v[k - 1]))) return false;
    return !v.empty();
  };
  if (!strictly_decreasing(cfg.eps_ladder))
    throw std::invalid_argument("config: eps_ladder must be positive and strictly decreasing");
  if (!strictly_decreasing(cfg.eps0_ladder))
    throw std::invalid_argument("config: eps0_ladder must be positive and strictly decreasing");
  if (cfg.profile_points < 2) throw std::invalid_argument("config: profile_points must be at least 2");
  if (cfg.embedding_dim < 2) throw std::invalid_argument("config: embedding_dim must be at least 2");
  if (cfg.audit_grid < 2) throw std::invalid_argument("config: audit_grid must be at least 2");
  if (!(cfg.audit_eps0 > 0.0)) throw std::invalid_argument("config: audit_eps0 must be positive");
}

/// Parses "key = value" lines; '#' starts a comment.
inline ExperimentConfig parse_config(std::istream& is, ExperimentConfig cfg = {}) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    set_config_value(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline ExperimentConfig parse_config_string(const std::string& text, ExperimentConfig cfg = {}) {
  std::istringstream is(text);
  return parse_config(is, std::move(cfg));
}

}  // namespace geolap::experiments
