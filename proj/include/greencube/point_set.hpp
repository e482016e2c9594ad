#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace greencube {

// Throws ValidationError unless x has m coordinates, each in [0, 1].
void check_cube_point(std::span<const double> x, int m);

// A list of points of I^m stored column-major (each coordinate contiguous),
// the layout consumed by the SIMD kernels.
class PointSet {
 public:
  PointSet() = default;
  PointSet(int m, std::size_t count);
  static PointSet from_rows(std::span<const std::vector<double>> rows, int m);

  int dimension() const { return m_; }
  std::size_t size() const { return count_; }
  std::size_t stride() const { return count_; }

  double operator()(std::size_t i, int j) const { return coords_[j * count_ + i]; }
  double& operator()(std::size_t i, int j) { return coords_[j * count_ + i]; }
  const double* column(int j) const { return coords_.data() + j * count_; }
  const double* data() const { return coords_.data(); }

  std::vector<double> point(std::size_t i) const;
  void set_point(std::size_t i, std::span<const double> x);

 private:
  int m_ = 0;
  std::size_t count_ = 0;
  std::vector<double> coords_;
};

// Cartesian product axis^m; the first coordinate varies fastest.
PointSet tensor_grid(int m, std::span<const double> axis);

// per_axis^m points with coordinates k / (per_axis + 1), k = 1..per_axis.
PointSet interior_grid(int m, int per_axis);

}  // namespace greencube
