#pragma once

#include <map>
#include <optional>
#include <span>

#include "greencube/green_kernel.hpp"
#include "greencube/measure.hpp"
#include "greencube/quadrature.hpp"

namespace greencube {

// A direction of departure from independence: the theta-derivative of a
// copula family at theta = 0, given as an evaluator on I^m. The density (its
// mixed derivative) and restrictions to faces x_U = 1 are optional; without
// them they are obtained by finite differences and by substitution.
class DependenceFunction {
 public:
  DependenceFunction(int m, CubeFunction value);

  DependenceFunction& with_density(CubeFunction density);
  // `restricted` receives a full-length point; coordinates in U are 1.
  DependenceFunction& with_face(SubsetMask u, CubeFunction restricted);
  // The evaluator is not trusted on faces: every face restriction must be
  // supplied through with_face.
  DependenceFunction& require_explicit_faces();

  int dimension() const { return m_; }
  double operator()(std::span<const double> x) const { return value_(x); }
  const std::optional<CubeFunction>& density() const { return density_; }

  // Value of the restriction to x_U = 1 at x (coordinates of x in U ignored).
  double face(SubsetMask u, std::span<const double> x) const;

  DependenceFunction scaled(double c) const;

 private:
  int m_;
  CubeFunction value_;
  std::optional<CubeFunction> density_;
  std::map<std::uint32_t, CubeFunction> faces_;
  bool explicit_faces_ = false;
};

// Integral of the dependence function over I^m (tensor Gauss-Legendre).
double integrate_dependence(const DependenceFunction& f);

// Checks vanishing on the left faces x_k = 0 and on the right faces x_U = 1
// with |U| = m - 1 at a fixed set of probe points. Throws ValidationError
// when |value| exceeds tol * max(1, max interior |value|).
void check_copula_boundary(const DependenceFunction& f, double tol = 1e-6);

// Minimizer of the H^m norm subject to the family's boundary conditions and
// the integral constraint against mu:
//   Omega(x) = lambda^{-1} * integral of G(x, xi) d mu(xi).
class ExtremalSolution {
 public:
  ExtremalSolution(GreenKernel kernel, MeasureSpec mu, double lambda);

  const GreenKernel& kernel() const { return kernel_; }
  const MeasureSpec& measure() const { return mu_; }
  double lambda() const { return lambda_; }

  double omega(std::span<const double> x) const;
  // Exact mixed derivative d^m Omega / dx_1..dx_m.
  double omega_density(std::span<const double> x) const;

  DependenceFunction as_dependence_function() const;

 private:
  GreenKernel kernel_;
  MeasureSpec mu_;
  double lambda_;
};

// Throws ValidationError when lambda is not positive (the measure sits where
// the kernel vanishes).
ExtremalSolution solve(const MonotoneFamily& family, const MeasureSpec& mu,
                       LambdaMethod method = LambdaMethod::kAuto);

// 1 / lambda; equals the integral of (d^m Omega)^2 over I^m.
double minimal_norm_squared(const ExtremalSolution& sol);

// Nested m-fold central difference with step h. The point must sit at
// distance >= m * h from the boundary.
double mixed_derivative(const CubeFunction& f, std::span<const double> x, double h);

// 1 / lambda(G_family, mu): the coefficient of the local efficiency index.
double efficiency_coefficient(const MonotoneFamily& family, const MeasureSpec& mu);

// Small-theta coefficient of the Bahadur exact slope of B^1_{V,n}:
// (1 / lambda(M_V, Lebesgue)) * (integral of F0)^2.
double bahadur_slope_B1(SubsetMask known, int m, const DependenceFunction& f);

struct SpearmanPitmanSlope {
  double mean_derivative;  // mu'(0)
  double sigma;            // sigma(0)
  double slope_squared;    // (mu'(0) / sigma(0))^2
};

// Pitman slope of the multivariate Spearman rho statistic.
SpearmanPitmanSlope pitman_slope_spearman(int m, const DependenceFunction& f);

// Squared Pitman slope of the tied-down statistic Bhat^1:
// 12^m * (integral of F0 minus the alternating face corrections)^2.
double pitman_slope_bhat(int m, const DependenceFunction& f);

struct FisherOptions {
  double step = 1e-3;       // finite-difference step h
  bool use_density = true;  // use a supplied closed-form density when present
  std::optional<CubeRule> rule;
};

// Integral of the squared density over I^m. Without a closed-form density
// the mixed derivative comes from finite differences on cubes shrunk by
// margins m h, 2 m h and 3 m h, extrapolated quadratically to the full cube.
double fisher_info(const DependenceFunction& f, const FisherOptions& options = {});

struct OptimalityGap {
  double index;   // (1 / lambda) * (integral of F0 d mu)^2
  double fisher;  // integral of the squared density
  double gap;     // fisher - index, >= 0 up to quadrature error
};

OptimalityGap optimality_gap(const MonotoneFamily& family, const MeasureSpec& mu,
                             const DependenceFunction& f, const FisherOptions& options = {});

struct EigenEstimate {
  double value;           // extrapolated principal eigenvalue
  double coarse;          // Nystrom estimate on grid_n nodes per axis
  double fine;            // Nystrom estimate on 2 * grid_n nodes per axis
  double error_estimate;  // |extrapolated - coarse|
  int grid_n;
  int iterations;         // power iterations on the fine grid
};

// Principal eigenvalue of the single-grid Nystrom matrix
// D^{1/2} K D^{1/2} on a tensor Gauss-Legendre grid.
double nystrom_principal_eigenvalue(const GreenKernel& kernel, int grid_n, int threads = 1,
                                    int* iterations = nullptr);

// Nystrom estimates at grid_n and 2 grid_n, Richardson-extrapolated with
// the O(n^-2) rate of the kinked kernel. Requires grid_n >= 8 and
// (2 grid_n)^m <= 20000.
EigenEstimate principal_eigenvalue(const GreenKernel& kernel, int grid_n, int threads = 1);

}  // namespace greencube
