#include "greencube/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greencube/error.hpp"

namespace greencube {

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    comp_ += (sum_ - t) + v;
  } else {
    comp_ += (v - t) + sum_;
  }
  sum_ = t;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Tricomi initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  return rule;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, int order,
                                        double a, double b) {
  std::vector<double> cuts{a, b};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const QuadratureRule ref = gauss_legendre(order, 0.0, 1.0);
  QuadratureRule rule;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double len = cuts[s + 1] - lo;
    if (len <= 0.0) continue;
    for (int k = 0; k < order; ++k) {
      rule.nodes.push_back(lo + len * ref.nodes[k]);
      rule.weights.push_back(len * ref.weights[k]);
    }
  }
  return rule;
}

QuadratureRule uniform_composite_rule(int segments, int order, double a, double b) {
  if (segments < 1) throw ValidationError("composite rule needs at least one segment");
  std::vector<double> cuts;
  for (int s = 1; s < segments; ++s) cuts.push_back(a + (b - a) * s / segments);
  return composite_gauss_legendre(cuts, order, a, b);
}

CubeRule default_cube_rule(int m) {
  switch (m) {
    case 1: return {64, 8};
    case 2: return {16, 6};
    case 3: return {8, 4};
    case 4: return {4, 4};
    case 5: return {2, 4};
    case 6: return {2, 3};
    default: return {1, 3};
  }
}

double integrate_cube(const CubeFunction& f, int m, const QuadratureRule& axis_rule) {
  const std::size_t k = axis_rule.nodes.size();
  std::size_t total = 1;
  for (int j = 0; j < m; ++j) total *= k;
  std::vector<double> x(m);
  std::vector<std::size_t> idx(m, 0);
  CompensatedSum sum;
  for (std::size_t i = 0; i < total; ++i) {
    double w = 1.0;
    for (int j = 0; j < m; ++j) {
      x[j] = axis_rule.nodes[idx[j]];
      w *= axis_rule.weights[idx[j]];
    }
    sum.add(w * f(x));
    for (int j = 0; j < m; ++j) {
      if (++idx[j] < k) break;
      idx[j] = 0;
    }
  }
  return sum.value();
}

double integrate_cube(const CubeFunction& f, int m, CubeRule rule, double lo, double hi) {
  return integrate_cube(f, m, uniform_composite_rule(rule.segments, rule.order, lo, hi));
}

}  // namespace greencube
