#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace topent {

/// Finite sample of points in R^dim, stored point-major.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::vector<double> coords, std::string description = {})
      : dim_(dim), coords_(std::move(coords)), description_(std::move(description)) {
    if (dim_ == 0 || coords_.size() % dim_ != 0)
      throw std::invalid_argument("point cloud: coordinate count is not a multiple of the dimension");
  }

  /// n equally spaced points a, ..., b on a line.
  static PointCloud uniform_grid(std::size_t n, double a = 0.0, double b = 1.0) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return PointCloud(1, std::move(c), "uniform grid of " + std::to_string(n) + " points");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  const std::vector<double>& coords() const { return coords_; }
  const std::string& description() const { return description_; }

 private:
  std::size_t dim_ = 1;
  std::vector<double> coords_;
  std::string description_;
};

}  // namespace topent
