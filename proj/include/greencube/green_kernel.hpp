#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "greencube/point_set.hpp"
#include "greencube/set_family.hpp"
#include "greencube/simd/kernels.hpp"

namespace greencube {

// Green function of the boundary-value problem indexed by a monotone family:
//
//   G(x, xi) = prod_j min(x_j, xi_j) - sum_{U in family} a_U
//              * prod_{j not in U} min(x_j, xi_j) * prod_{j in U} x_j xi_j,
//
// with integer coefficients fixed by sum_{V subset of U, V in family} a_V = 1
// for every member U. G vanishes on every left face x_j = 0 and on every
// right face x_U = 1 with U in the family. It is also the covariance of the
// matching Gaussian field (Brownian sheet for the empty family, Brownian
// pillow for all nonempty subsets, tucked sheet for {M}).
class GreenKernel {
 public:
  explicit GreenKernel(MonotoneFamily family);

  const MonotoneFamily& family() const { return family_; }
  int dimension() const { return family_.dimension(); }

  // a_U in the same order as family().members().
  std::span<const std::int64_t> coefficients() const { return coeffs_; }
  // Throws ValidationError if u is not a member.
  std::int64_t coefficient(SubsetMask u) const;

  // Validating evaluation of G(x, xi).
  double operator()(std::span<const double> x, std::span<const double> xi) const;

  // out[i] = G(x, points_i) through the active SIMD backend. No validation
  // of the point coordinates.
  void evaluate_row(std::span<const double> x, const PointSet& points,
                    std::span<double> out) const;

  simd::KernelView view() const { return {dimension(), terms_}; }

 private:
  MonotoneFamily family_;
  std::vector<std::int64_t> coeffs_;
  std::vector<simd::KernelTerm> terms_;
};

// Solves the coefficient recurrence for the family (members in increasing
// cardinality, a_U = 1 - sum of a_V over members V strictly inside U).
GreenKernel coefficients(const MonotoneFamily& family);

double evaluate(const GreenKernel& kernel, std::span<const double> x,
                std::span<const double> xi);

// Faces x_U = 1 on which the kernel vanishes: exactly the family members.
std::vector<SubsetMask> vanishing_faces(const GreenKernel& kernel);

// Entry (i, j) = G(p_i, p_j). Exactly symmetric: each pair is evaluated once.
Eigen::MatrixXd gram_matrix(const GreenKernel& kernel, const PointSet& points,
                            int threads = 1);

}  // namespace greencube
