#pragma once

// Rasterized rotating-ball densities and grid Lp distances. Serves as an
// independent numerical check on the closed-form rotating-ball oracles.

#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolap/angle.hpp"

namespace geolap {

/// Square domain [-half_width, half_width]^2.
struct SquareExtent {
  double half_width = 2.0;
};

class RasterImage {
 public:
  RasterImage(std::size_t grid_size, SquareExtent extent, std::vector<double> values)
      : grid_size_(grid_size), extent_(extent), values_(std::move(values)) {
    if (grid_size_ == 0) throw std::invalid_argument("RasterImage: grid_size must be positive");
    if (!(extent_.half_width > 0.0)) throw std::invalid_argument("RasterImage: extent must be positive");
    if (values_.size() != grid_size_ * grid_size_)
      throw std::invalid_argument("RasterImage: expected grid_size^2 values");
    for (double v : values_)
      if (!(v >= 0.0)) throw std::invalid_argument("RasterImage: densities must be nonnegative");
  }

  std::size_t grid_size() const { return grid_size_; }
  SquareExtent extent() const { return extent_; }
  double cell_side() const { return 2.0 * extent_.half_width / static_cast<double>(grid_size_); }
  double cell_area() const { return cell_side() * cell_side(); }

  /// Row-major; row indexes y, column indexes x.
  double at(std::size_t row, std::size_t col) const { return values_[row * grid_size_ + col]; }
  const std::vector<double>& values() const { return values_; }

  /// cell_area times the sum of all values.
  double mass() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * cell_area();
  }

 private:
  std::size_t grid_size_;
  SquareExtent extent_;
  std::vector<double> values_;
};

/// The density (1/4r) 1_{B_r((cos t, sin t))} sampled by the cell-center test.
inline RasterImage rasterize_ball(Angle theta, double r, std::size_t grid_size = 128, SquareExtent extent = {}) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("rasterize_ball: radius must lie in (0, 1]");
  if (grid_size == 0) throw std::invalid_argument("rasterize_ball: grid_size must be positive");
  if (1.0 + r > extent.half_width)
    throw std::invalid_argument("rasterize_ball: ball of radius " + std::to_string(r) +
                                " does not fit in the extent");
  const double cx = std::cos(theta.radians()), cy = std::sin(theta.radians());
  const double h = 2.0 * extent.half_width / static_cast<double>(grid_size);
  const double level = 1.0 / (4.0 * r);
  std::vector<double> values(grid_size * grid_size, 0.0);
  for (std::size_t row = 0; row < grid_size; ++row) {
    const double y = -extent.half_width + (static_cast<double>(row) + 0.5) * h - cy;
    for (std::size_t col = 0; col < grid_size; ++col) {
      const double x = -extent.half_width + (static_cast<double>(col) + 0.5) * h - cx;
      if (x * x + y * y < r * r) values[row * grid_size + col] = level;
    }
  }
  return RasterImage(grid_size, extent, std::move(values));
}

/// (cell_area * sum |a - b|^p)^(1/p) for p in {1, 2}.
inline double image_lp_distance(const RasterImage& a, const RasterImage& b, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("image_lp_distance: p must be 1 or 2");
  if (a.grid_size() != b.grid_size() || a.extent().half_width != b.extent().half_width)
    throw std::invalid_argument("image_lp_distance: grid mismatch");
  double s = 0.0;
  const auto& va = a.values();
  const auto& vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = std::abs(va[i] - vb[i]);
    s += p == 1 ? d : d * d;
  }
  s *= a.cell_area();
  return p == 1 ? s : std::sqrt(s);
}

/// Portable float grid: "grid_size half_width" on the first line, then one
/// row of values per line.
inline void write_float_grid(std::ostream& os, const RasterImage& img) {
  const auto old_precision = os.precision(17);
  os << img.grid_size() << ' ' << img.extent().half_width << '\n';
  for (std::size_t row = 0; row < img.grid_size(); ++row) {
    for (std::size_t col = 0; col < img.grid_size(); ++col) {
      if (col) os << ' ';
      os << img.at(row, col);
    }
    os << '\n';
  }
  os.precision(old_precision);
}

inline RasterImage read_float_grid(std::istream& is) {
  std::size_t n = 0;
  double half = 0.0;
  if (!(is >> n >> half)) throw std::runtime_error("read_float_grid: malformed header");
  std::vector<double> values(n * n);
  for (double& v : values)
    if (!(is >> v)) throw std::runtime_error("read_float_grid: truncated grid");
  return RasterImage(n, SquareExtent{half}, std::move(values));
}

}  // namespace geolap
