#pragma once

#include <span>
#include <variant>
#include <vector>

#include "greencube/green_kernel.hpp"
#include "greencube/quadrature.hpp"

namespace greencube {

struct LebesgueMeasure {};
// Image of Lebesgue measure on [0,1] under t -> (t, ..., t).
struct DiagonalMeasure {};
// Image under t -> (1 - t, t); m = 2 only.
struct AntiDiagonalMeasure {};

struct PointMass {
  std::vector<double> x;
  double weight = 1.0;
};

struct PointMasses {
  std::vector<PointMass> atoms;
};

struct WeightedTerm;

struct WeightedSum {
  std::vector<WeightedTerm> terms;
};

// A finite positive measure on I^m.
class MeasureSpec {
 public:
  using Variant = std::variant<LebesgueMeasure, DiagonalMeasure, AntiDiagonalMeasure,
                               PointMasses, WeightedSum>;

  static MeasureSpec lebesgue(int m);
  static MeasureSpec diagonal(int m);
  static MeasureSpec antidiagonal(int m);
  static MeasureSpec points(int m, std::vector<PointMass> atoms);
  static MeasureSpec sum(std::vector<WeightedTerm> terms);
  // c * mu as a one-term weighted sum.
  static MeasureSpec scaled(const MeasureSpec& mu, double c);

  int dimension() const { return m_; }
  const Variant& variant() const { return v_; }
  double total_mass() const;

 private:
  MeasureSpec(int m, Variant v);

  int m_ = 0;
  Variant v_;
};

struct WeightedTerm {
  MeasureSpec measure;
  double weight = 1.0;
};

enum class LambdaMethod {
  kAuto,        // closed form where one exists, quadrature otherwise
  kClosedForm,  // throws ValidationError when no closed form is available
  kQuadrature,  // breakpoint-aligned Gauss-Legendre only
};

// Integral of G(x, xi) d mu(xi).
double integrate_kernel_once(const GreenKernel& kernel, const MeasureSpec& mu,
                             std::span<const double> x, LambdaMethod method = LambdaMethod::kAuto);

// lambda = double integral of G d mu d mu.
double lambda(const GreenKernel& kernel, const MeasureSpec& mu,
              LambdaMethod method = LambdaMethod::kAuto);

// Mixed derivative d^m / dx_1..dx_m of integrate_kernel_once, in closed form
// for Lebesgue and point masses and by exact piecewise quadrature on lines.
double integrate_kernel_density_once(const GreenKernel& kernel, const MeasureSpec& mu,
                                     std::span<const double> x);

// Integral of an arbitrary function against mu. Lebesgue parts use the cube
// rule, line parts a 64-segment composite rule in the line parameter.
double integrate_against(const MeasureSpec& mu, const CubeFunction& f,
                         CubeRule cube_rule);
double integrate_against(const MeasureSpec& mu, const CubeFunction& f);

}  // namespace greencube
