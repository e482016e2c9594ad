#include "greencube/point_set.hpp"

#include <cmath>
#include <string>

#include "greencube/error.hpp"

namespace greencube {

void check_cube_point(std::span<const double> x, int m) {
  if (static_cast<int>(x.size()) != m) {
    throw ValidationError("point has " + std::to_string(x.size()) + " coordinates, expected " +
                          std::to_string(m));
  }
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("coordinate " + std::to_string(v) + " outside [0,1]");
    }
  }
}

PointSet::PointSet(int m, std::size_t count)
    : m_(m), count_(count), coords_(static_cast<std::size_t>(m) * count, 0.0) {
  if (m < 1) throw ValidationError("point set dimension must be positive");
}

PointSet PointSet::from_rows(std::span<const std::vector<double>> rows, int m) {
  PointSet ps(m, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) ps.set_point(i, rows[i]);
  return ps;
}

std::vector<double> PointSet::point(std::size_t i) const {
  std::vector<double> x(m_);
  for (int j = 0; j < m_; ++j) x[j] = (*this)(i, j);
  return x;
}

void PointSet::set_point(std::size_t i, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m_) {
    throw ValidationError("point has " + std::to_string(x.size()) + " coordinates, expected " +
                          std::to_string(m_));
  }
  for (int j = 0; j < m_; ++j) (*this)(i, j) = x[j];
}

PointSet tensor_grid(int m, std::span<const double> axis) {
  const std::size_t k = axis.size();
  std::size_t total = 1;
  for (int j = 0; j < m; ++j) total *= k;
  PointSet ps(m, total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t r = i;
    for (int j = 0; j < m; ++j) {
      ps(i, j) = axis[r % k];
      r /= k;
    }
  }
  return ps;
}

PointSet interior_grid(int m, int per_axis) {
  if (per_axis < 1) throw ValidationError("grid needs at least one point per axis");
  std::vector<double> axis(per_axis);
  for (int k = 0; k < per_axis; ++k) axis[k] = double(k + 1) / double(per_axis + 1);
  return tensor_grid(m, axis);
}

}  // namespace greencube
