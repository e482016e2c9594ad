#pragma once

#include <functional>
#include <span>
#include <vector>

namespace greencube {

using CubeFunction = std::function<double(std::span<const double>)>;

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n, double a = 0.0, double b = 1.0);

// Gauss-Legendre with `order` nodes on each interval between consecutive
// breakpoints. Breakpoints are sorted, deduplicated and clipped to [a, b].
QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, int order,
                                        double a = 0.0, double b = 1.0);

// `segments` equal pieces of [a, b], `order` nodes each.
QuadratureRule uniform_composite_rule(int segments, int order, double a = 0.0, double b = 1.0);

struct CubeRule {
  int segments = 1;
  int order = 4;
};

// Per-axis resolution that keeps the tensor rule under ~10^5 nodes.
CubeRule default_cube_rule(int m);

// Tensor-product integral of f over [lo, hi]^m with the per-axis rule.
double integrate_cube(const CubeFunction& f, int m, const QuadratureRule& axis_rule);
double integrate_cube(const CubeFunction& f, int m, CubeRule rule, double lo = 0.0,
                      double hi = 1.0);

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace greencube
