#include "greencube/green_kernel.hpp"

#include <algorithm>
#include <string>

#include "greencube/error.hpp"
#include "greencube/parallel.hpp"

namespace greencube {

GreenKernel::GreenKernel(MonotoneFamily family) : family_(std::move(family)) {
  const auto members = family_.members();
  coeffs_.resize(members.size());
  // Members are sorted by cardinality, so every proper subset is already done.
  for (std::size_t i = 0; i < members.size(); ++i) {
    std::int64_t a = 1;
    for (std::size_t k = 0; k < i; ++k) {
      if (members[k] != members[i] && members[k].is_subset_of(members[i])) {
        if (__builtin_sub_overflow(a, coeffs_[k], &a)) {
          throw NumericalError("coefficient overflow for subset " + members[i].to_string());
        }
      }
    }
    coeffs_[i] = a;
  }
  terms_.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    terms_.push_back({members[i].bits(), static_cast<double>(coeffs_[i])});
  }
}

std::int64_t GreenKernel::coefficient(SubsetMask u) const {
  const auto members = family_.members();
  const auto it = std::lower_bound(members.begin(), members.end(), u);
  if (it == members.end() || *it != u) {
    throw ValidationError("subset " + u.to_string() + " is not a member of the family");
  }
  return coeffs_[static_cast<std::size_t>(it - members.begin())];
}

double GreenKernel::operator()(std::span<const double> x, std::span<const double> xi) const {
  const int m = dimension();
  check_cube_point(x, m);
  check_cube_point(xi, m);
  double out = 0.0;
  // A one-point column-major set is just the coordinate vector.
  simd::detail::kScalarTable.green_row(view(), x.data(), xi.data(), 1, 1, &out);
  return out;
}

void GreenKernel::evaluate_row(std::span<const double> x, const PointSet& points,
                               std::span<double> out) const {
  if (points.dimension() != dimension() || static_cast<int>(x.size()) != dimension()) {
    throw ValidationError("dimension mismatch in kernel row evaluation");
  }
  if (out.size() < points.size()) throw ValidationError("output row too short");
  simd::active().green_row(view(), x.data(), points.data(), points.stride(), points.size(),
                           out.data());
}

GreenKernel coefficients(const MonotoneFamily& family) { return GreenKernel(family); }

double evaluate(const GreenKernel& kernel, std::span<const double> x,
                std::span<const double> xi) {
  return kernel(x, xi);
}

std::vector<SubsetMask> vanishing_faces(const GreenKernel& kernel) {
  const auto members = kernel.family().members();
  return {members.begin(), members.end()};
}

Eigen::MatrixXd gram_matrix(const GreenKernel& kernel, const PointSet& points, int threads) {
  const int m = kernel.dimension();
  if (points.dimension() != m) {
    throw ValidationError("point set has dimension " + std::to_string(points.dimension()) +
                          ", kernel has " + std::to_string(m));
  }
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) check_cube_point(points.point(i), m);

  Eigen::MatrixXd g(n, n);
  const auto& kt = simd::active();
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(m);
    std::vector<double> row(n);
    for (std::size_t i = begin; i < end; ++i) {
      for (int j = 0; j < m; ++j) x[j] = points(i, j);
      // Upper triangle from column i on; the strided view starts at point i.
      kt.green_row(kernel.view(), x.data(), points.data() + i, points.stride(), n - i,
                   row.data());
      for (std::size_t k = i; k < n; ++k) g(i, k) = row[k - i];
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) g(k, i) = g(i, k);
  }
  return g;
}

}  // namespace greencube
