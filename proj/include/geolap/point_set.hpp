#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace geolap {

/// A single point in chart coordinates.
using PointView = std::span<const double>;

/// n points of a fixed chart dimension, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw std::invalid_argument("PointSet: chart dimension must be positive");
    if (coords_.size() % dim_ != 0)
      throw std::invalid_argument("PointSet: coordinate count is not a multiple of the dimension");
  }

  /// One-dimensional chart, e.g. angles on the circle.
  static PointSet from_scalars(std::vector<double> values) { return PointSet(1, std::move(values)); }

  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size() == 0; }

  PointView operator[](std::size_t i) const { return PointView(coords_.data() + i * dim_, dim_); }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::size_t dim_ = 1;
  std::vector<double> coords_;
};

}  // namespace geolap
