#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolap/angle.hpp"

namespace geolap::experiments {

/// Seed for repetition `trial` of a run seeded with `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) { return seed ^ static_cast<std::uint64_t>(trial); }

/// mt19937_64 with a portable mapping to [0, 1), so draws are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<double> sample_uniform_angles(std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (double& t : out) t = kTwoPi * rng.uniform01();
  return out;
}

/// A probability density on the circle with respect to d(theta).
struct CircleDensity {
  std::string name;
  std::function<double(double)> p;
  std::function<double(double)> dp;
};

/// "uniform"; "cosine" (1 + cos/2) / 2pi; "weighted_l1", proportional to
/// 1 / (w1 |sin| + w2 |cos|) using w1, w2 from params.
inline CircleDensity make_density(const std::string& name, const std::map<std::string, double>& params = {}) {
  if (name == "uniform")
    return {name, [](double) { return 1.0 / kTwoPi; }, [](double) { return 0.0; }};
  if (name == "cosine")
    return {name, [](double t) { return (1.0 + 0.5 * std::cos(t)) / kTwoPi; },
            [](double t) { return -0.5 * std::sin(t) / kTwoPi; }};
  if (name == "weighted_l1") {
    auto get = [&](const char* k) {
      auto it = params.find(k);
      return it == params.end() ? 1.0 : it->second;
    };
    const double w1 = get("w1"), w2 = get("w2");
    if (!(w1 > 0.0 && w2 > 0.0)) throw std::invalid_argument("weighted_l1 density: weights must be positive");
    auto Q = [w1, w2](double t) { return w1 * std::abs(std::sin(t)) + w2 * std::abs(std::cos(t)); };
    // Normalizing constant by the midpoint rule; the integrand is smooth
    // between quadrant boundaries, which land on cell edges.
    const std::size_t cells = std::size_t{1} << 16;
    double z = 0.0;
    for (std::size_t k = 0; k < cells; ++k) z += 1.0 / Q((static_cast<double>(k) + 0.5) * kTwoPi / cells);
    z *= kTwoPi / static_cast<double>(cells);
    return {name, [Q, z](double t) { return 1.0 / (z * Q(t)); },
            [w1, w2, Q, z](double t) {
              const double s = std::sin(t), c = std::cos(t);
              const double dQ = w1 * (s > 0 ? 1.0 : -1.0) * c - w2 * (c > 0 ? 1.0 : -1.0) * s;
              return -dQ / (z * Q(t) * Q(t));
            }};
  }
  throw std::invalid_argument("unknown density '" + name + "'");
}

/// Inverse-CDF sampling from a tabulated density on [0, 2 pi).
class InverseCdfSampler {
 public:
  explicit InverseCdfSampler(const CircleDensity& density, std::size_t table_size = std::size_t{1} << 16)
      : cdf_(table_size + 1, 0.0) {
    if (table_size < 2) throw std::invalid_argument("InverseCdfSampler: table too small");
    h_ = kTwoPi / static_cast<double>(table_size);
    for (std::size_t k = 0; k < table_size; ++k) {
      const double p = density.p((static_cast<double>(k) + 0.5) * h_);
      if (!(p >= 0.0)) throw std::invalid_argument("InverseCdfSampler: density must be nonnegative");
      cdf_[k + 1] = cdf_[k] + p * h_;
    }
    const double total = cdf_.back();
    if (!(total > 0.0)) throw std::invalid_argument("InverseCdfSampler: density has zero mass");
    for (double& v : cdf_) v /= total;
  }

  double operator()(Rng& rng) const {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cdf_.begin())) - 1;
    const double lo = cdf_[k], hi = cdf_[std::min(k + 1, cdf_.size() - 1)];
    const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
    return Angle::canonical((static_cast<double>(k) + frac) * h_);
  }

  std::vector<double> sample(std::size_t n, Rng& rng) const {
    std::vector<double> out(n);
    for (double& t : out) t = (*this)(rng);
    return out;
  }

 private:
  std::vector<double> cdf_;
  double h_ = 0.0;
};

}  // namespace geolap::experiments
