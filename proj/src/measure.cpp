#include "greencube/measure.hpp"

#include <cmath>
#include <string>

#include "greencube/error.hpp"

namespace greencube {

MeasureSpec::MeasureSpec(int m, Variant v) : m_(m), v_(std::move(v)) {}

MeasureSpec MeasureSpec::lebesgue(int m) {
  check_dimension(m);
  return {m, LebesgueMeasure{}};
}

MeasureSpec MeasureSpec::diagonal(int m) {
  check_dimension(m);
  return {m, DiagonalMeasure{}};
}

MeasureSpec MeasureSpec::antidiagonal(int m) {
  if (m != 2) throw ValidationError("anti-diagonal measure is defined for m=2 only");
  return {m, AntiDiagonalMeasure{}};
}

namespace {

void check_weight(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw ValidationError("measure weights must be finite and positive, got " +
                          std::to_string(w));
  }
}

}  // namespace

MeasureSpec MeasureSpec::points(int m, std::vector<PointMass> atoms) {
  check_dimension(m);
  if (atoms.empty()) throw ValidationError("point-mass measure needs at least one atom");
  for (const auto& a : atoms) {
    check_cube_point(a.x, m);
    check_weight(a.weight);
  }
  return {m, PointMasses{std::move(atoms)}};
}

MeasureSpec MeasureSpec::sum(std::vector<WeightedTerm> terms) {
  if (terms.empty()) throw ValidationError("weighted sum needs at least one term");
  const int m = terms.front().measure.dimension();
  for (const auto& t : terms) {
    check_weight(t.weight);
    if (t.measure.dimension() != m) {
      throw ValidationError("weighted sum mixes dimensions " + std::to_string(m) + " and " +
                            std::to_string(t.measure.dimension()));
    }
  }
  return {m, WeightedSum{std::move(terms)}};
}

MeasureSpec MeasureSpec::scaled(const MeasureSpec& mu, double c) {
  return sum({WeightedTerm{mu, c}});
}

double MeasureSpec::total_mass() const {
  if (const auto* p = std::get_if<PointMasses>(&v_)) {
    double s = 0.0;
    for (const auto& a : p->atoms) s += a.weight;
    return s;
  }
  if (const auto* s = std::get_if<WeightedSum>(&v_)) {
    double total = 0.0;
    for (const auto& t : s->terms) total += t.weight * t.measure.total_mass();
    return total;
  }
  return 1.0;
}

namespace {

// Affine segment t -> alpha + beta * t through the cube.
struct Line {
  std::vector<double> alpha;
  std::vector<double> beta;
  bool diagonal = false;

  double at(int j, double t) const { return alpha[j] + beta[j] * t; }
};

struct Atom {
  enum class Kind { kLebesgue, kLine, kPoint } kind;
  double weight;
  Line line;
  std::vector<double> point;
};

void flatten(const MeasureSpec& mu, double w, std::vector<Atom>& out) {
  const int m = mu.dimension();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LebesgueMeasure>) {
          out.push_back({Atom::Kind::kLebesgue, w, {}, {}});
        } else if constexpr (std::is_same_v<T, DiagonalMeasure>) {
          Line line{std::vector<double>(m, 0.0), std::vector<double>(m, 1.0), true};
          out.push_back({Atom::Kind::kLine, w, std::move(line), {}});
        } else if constexpr (std::is_same_v<T, AntiDiagonalMeasure>) {
          Line line{{1.0, 0.0}, {-1.0, 1.0}, false};
          out.push_back({Atom::Kind::kLine, w, std::move(line), {}});
        } else if constexpr (std::is_same_v<T, PointMasses>) {
          for (const auto& a : v.atoms) out.push_back({Atom::Kind::kPoint, w * a.weight, {}, a.x});
        } else {
          for (const auto& t : v.terms) flatten(t.measure, w * t.weight, out);
        }
      },
      mu.variant());
}

std::vector<Atom> atoms_of(const MeasureSpec& mu) {
  std::vector<Atom> atoms;
  flatten(mu, 1.0, atoms);
  return atoms;
}

void check_kernel_measure(const GreenKernel& kernel, const MeasureSpec& mu) {
  if (kernel.dimension() != mu.dimension()) {
    throw ValidationError("kernel dimension " + std::to_string(kernel.dimension()) +
                          " does not match measure dimension " +
                          std::to_string(mu.dimension()));
  }
}

// Integral of the weighted row G(x, nodes) through the SIMD backend.
double weighted_row_sum(const GreenKernel& kernel, std::span<const double> x,
                        const PointSet& nodes, std::span<const double> weights) {
  std::vector<double> row(nodes.size());
  kernel.evaluate_row(x, nodes, row);
  CompensatedSum s;
  for (std::size_t i = 0; i < row.size(); ++i) s.add(weights[i] * row[i]);
  return s.value();
}

// --- Lebesgue --------------------------------------------------------------

// Per coordinate: integral of min(x, xi) is x - x^2/2, of x * xi is x/2.
double lebesgue_once_closed(const GreenKernel& kernel, std::span<const double> x) {
  const int m = kernel.dimension();
  double full = 1.0;
  for (int j = 0; j < m; ++j) full *= x[j] - 0.5 * x[j] * x[j];
  double acc = 0.0;
  const auto members = kernel.family().members();
  const auto coeffs = kernel.coefficients();
  for (std::size_t u = 0; u < members.size(); ++u) {
    double t = static_cast<double>(coeffs[u]);
    for (int j = 0; j < m; ++j) {
      t *= members[u].contains(j) ? 0.5 * x[j] : x[j] - 0.5 * x[j] * x[j];
    }
    acc += t;
  }
  return full - acc;
}

constexpr int kMaxLebesgueQuadratureDim = 8;

// Tensor rule over xi with each axis split at x_j; the integrand is linear in
// xi_j on each piece, so two nodes per piece are exact.
double lebesgue_once_quadrature(const GreenKernel& kernel, std::span<const double> x) {
  const int m = kernel.dimension();
  if (m > kMaxLebesgueQuadratureDim) {
    throw ValidationError("Lebesgue quadrature path limited to m <= " +
                          std::to_string(kMaxLebesgueQuadratureDim));
  }
  std::vector<QuadratureRule> axes;
  std::size_t total = 1;
  for (int j = 0; j < m; ++j) {
    const double cut[] = {x[j]};
    axes.push_back(composite_gauss_legendre(cut, 2));
    total *= axes.back().nodes.size();
  }
  PointSet nodes(m, total);
  std::vector<double> weights(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t r = i;
    double w = 1.0;
    for (int j = 0; j < m; ++j) {
      const std::size_t k = axes[j].nodes.size();
      nodes(i, j) = axes[j].nodes[r % k];
      w *= axes[j].weights[r % k];
      r /= k;
    }
    weights[i] = w;
  }
  return weighted_row_sum(kernel, x, nodes, weights);
}

// Per coordinate pair: double integral of min is 1/3, of the product 1/4.
double lebesgue_lambda_closed(const GreenKernel& kernel) {
  const int m = kernel.dimension();
  double acc = 0.0;
  const auto members = kernel.family().members();
  const auto coeffs = kernel.coefficients();
  for (std::size_t u = 0; u < members.size(); ++u) {
    const int k = members[u].size();
    acc += static_cast<double>(coeffs[u]) * std::pow(3.0, -(m - k)) * std::pow(4.0, -k);
  }
  return std::pow(3.0, -m) - acc;
}

double lebesgue_lambda_quadrature(const GreenKernel& kernel) {
  const int m = kernel.dimension();
  // The once-integrated kernel has degree <= 2 per axis.
  const QuadratureRule outer = gauss_legendre(2);
  return integrate_cube(
      [&](std::span<const double> x) { return lebesgue_once_quadrature(kernel, x); }, m, outer);
}

// --- lines -----------------------------------------------------------------

std::vector<double> line_breakpoints(const Line& line, std::span<const double> x) {
  std::vector<double> cuts;
  for (std::size_t j = 0; j < x.size(); ++j) cuts.push_back((x[j] - line.alpha[j]) / line.beta[j]);
  return cuts;
}

// On each piece between breakpoints the integrand is a polynomial of degree
// <= 2m in t, so m + 1 nodes are exact.
double line_once(const GreenKernel& kernel, const Line& line, std::span<const double> x) {
  const int m = kernel.dimension();
  const QuadratureRule rule = composite_gauss_legendre(line_breakpoints(line, x), m + 1);
  PointSet nodes(m, rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    for (int j = 0; j < m; ++j) nodes(i, j) = line.at(j, rule.nodes[i]);
  }
  return weighted_row_sum(kernel, x, nodes, rule.weights);
}

double lebesgue_line_lambda(const GreenKernel& kernel, const Line& line, bool closed_inner) {
  const int m = kernel.dimension();
  const QuadratureRule rule = gauss_legendre(m + 1);
  CompensatedSum s;
  std::vector<double> p(m);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    for (int j = 0; j < m; ++j) p[j] = line.at(j, rule.nodes[i]);
    const double inner =
        closed_inner ? lebesgue_once_closed(kernel, p) : lebesgue_once_quadrature(kernel, p);
    s.add(rule.weights[i] * inner);
  }
  return s.value();
}

// Double integral of min(t,s)^a (ts)^b over the unit square.
double diagonal_moment(int a, int b) {
  return 2.0 / ((a + b + 1.0) * (a + 2.0 * b + 2.0));
}

double diagonal_lambda_closed(const GreenKernel& kernel) {
  const int m = kernel.dimension();
  double acc = 0.0;
  const auto members = kernel.family().members();
  const auto coeffs = kernel.coefficients();
  for (std::size_t u = 0; u < members.size(); ++u) {
    const int k = members[u].size();
    acc += static_cast<double>(coeffs[u]) * diagonal_moment(m - k, k);
  }
  return diagonal_moment(m, 0) - acc;
}

// Outer parameter values where the inner breakpoints cross each other or
// leave [0, 1]; between them the inner integral is a polynomial in t.
std::vector<double> outer_breakpoints(const Line& outer, const Line& inner) {
  const std::size_t m = outer.alpha.size();
  // Inner breakpoint for coordinate j: s_j(t) = c_j + d_j t.
  std::vector<double> c(m);
  std::vector<double> d(m);
  for (std::size_t j = 0; j < m; ++j) {
    c[j] = (outer.alpha[j] - inner.alpha[j]) / inner.beta[j];
    d[j] = outer.beta[j] / inner.beta[j];
  }
  std::vector<double> cuts;
  for (std::size_t j = 0; j < m; ++j) {
    for (double edge : {0.0, 1.0}) cuts.push_back((edge - c[j]) / d[j]);
    for (std::size_t k = j + 1; k < m; ++k) {
      if (d[j] != d[k]) cuts.push_back((c[k] - c[j]) / (d[j] - d[k]));
    }
  }
  return cuts;
}

double line_line_lambda(const GreenKernel& kernel, const Line& outer, const Line& inner) {
  const int m = kernel.dimension();
  const QuadratureRule rule = composite_gauss_legendre(outer_breakpoints(outer, inner), m + 2);
  CompensatedSum s;
  std::vector<double> p(m);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    for (int j = 0; j < m; ++j) p[j] = outer.at(j, rule.nodes[i]);
    s.add(rule.weights[i] * line_once(kernel, inner, p));
  }
  return s.value();
}

double atom_once(const GreenKernel& kernel, const Atom& a, std::span<const double> x,
                 LambdaMethod method) {
  switch (a.kind) {
    case Atom::Kind::kLebesgue:
      return method == LambdaMethod::kQuadrature ? lebesgue_once_quadrature(kernel, x)
                                                 : lebesgue_once_closed(kernel, x);
    case Atom::Kind::kLine:
      return line_once(kernel, a.line, x);
    case Atom::Kind::kPoint:
      return kernel(x, a.point);
  }
  return 0.0;
}

double atom_pair(const GreenKernel& kernel, const Atom& a, const Atom& b, LambdaMethod method) {
  using K = Atom::Kind;
  if (a.kind == K::kPoint) return atom_once(kernel, b, a.point, method);
  if (b.kind == K::kPoint) return atom_once(kernel, a, b.point, method);
  const bool quad = method == LambdaMethod::kQuadrature;
  if (a.kind == K::kLebesgue && b.kind == K::kLebesgue) {
    return quad ? lebesgue_lambda_quadrature(kernel) : lebesgue_lambda_closed(kernel);
  }
  if (a.kind == K::kLebesgue) return lebesgue_line_lambda(kernel, b.line, !quad);
  if (b.kind == K::kLebesgue) return lebesgue_line_lambda(kernel, a.line, !quad);
  if (a.line.diagonal && b.line.diagonal && !quad) return diagonal_lambda_closed(kernel);
  if (method == LambdaMethod::kClosedForm) {
    throw ValidationError("no closed form for lambda over a pair of non-diagonal lines");
  }
  return line_line_lambda(kernel, a.line, b.line);
}

}  // namespace

double integrate_kernel_once(const GreenKernel& kernel, const MeasureSpec& mu,
                             std::span<const double> x, LambdaMethod method) {
  check_kernel_measure(kernel, mu);
  check_cube_point(x, kernel.dimension());
  CompensatedSum s;
  for (const auto& a : atoms_of(mu)) s.add(a.weight * atom_once(kernel, a, x, method));
  return s.value();
}

double lambda(const GreenKernel& kernel, const MeasureSpec& mu, LambdaMethod method) {
  check_kernel_measure(kernel, mu);
  const auto atoms = atoms_of(mu);
  CompensatedSum s;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    s.add(atoms[i].weight * atoms[i].weight * atom_pair(kernel, atoms[i], atoms[i], method));
    for (std::size_t k = i + 1; k < atoms.size(); ++k) {
      s.add(2.0 * atoms[i].weight * atoms[k].weight *
            atom_pair(kernel, atoms[i], atoms[k], method));
    }
  }
  return s.value();
}

namespace {

// Mixed derivative of G(x, xi) in x: indicators replace the minima, xi_j
// replaces the products.
double kernel_density(const GreenKernel& kernel, std::span<const double> x,
                      std::span<const double> xi) {
  const int m = kernel.dimension();
  double full = 1.0;
  for (int j = 0; j < m; ++j) full *= xi[j] > x[j] ? 1.0 : 0.0;
  double acc = 0.0;
  const auto members = kernel.family().members();
  const auto coeffs = kernel.coefficients();
  for (std::size_t u = 0; u < members.size(); ++u) {
    double t = static_cast<double>(coeffs[u]);
    for (int j = 0; j < m; ++j) {
      t *= members[u].contains(j) ? xi[j] : (xi[j] > x[j] ? 1.0 : 0.0);
    }
    acc += t;
  }
  return full - acc;
}

double atom_density(const GreenKernel& kernel, const Atom& a, std::span<const double> x) {
  const int m = kernel.dimension();
  switch (a.kind) {
    case Atom::Kind::kLebesgue: {
      double full = 1.0;
      for (int j = 0; j < m; ++j) full *= 1.0 - x[j];
      double acc = 0.0;
      const auto members = kernel.family().members();
      const auto coeffs = kernel.coefficients();
      for (std::size_t u = 0; u < members.size(); ++u) {
        double t = static_cast<double>(coeffs[u]);
        for (int j = 0; j < m; ++j) t *= members[u].contains(j) ? 0.5 : 1.0 - x[j];
        acc += t;
      }
      return full - acc;
    }
    case Atom::Kind::kLine: {
      const QuadratureRule rule = composite_gauss_legendre(line_breakpoints(a.line, x), m + 1);
      CompensatedSum s;
      std::vector<double> p(m);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        for (int j = 0; j < m; ++j) p[j] = a.line.at(j, rule.nodes[i]);
        s.add(rule.weights[i] * kernel_density(kernel, x, p));
      }
      return s.value();
    }
    case Atom::Kind::kPoint:
      return kernel_density(kernel, x, a.point);
  }
  return 0.0;
}

}  // namespace

double integrate_kernel_density_once(const GreenKernel& kernel, const MeasureSpec& mu,
                                     std::span<const double> x) {
  check_kernel_measure(kernel, mu);
  check_cube_point(x, kernel.dimension());
  CompensatedSum s;
  for (const auto& a : atoms_of(mu)) s.add(a.weight * atom_density(kernel, a, x));
  return s.value();
}

double integrate_against(const MeasureSpec& mu, const CubeFunction& f, CubeRule cube_rule) {
  const int m = mu.dimension();
  CompensatedSum s;
  for (const auto& a : atoms_of(mu)) {
    switch (a.kind) {
      case Atom::Kind::kLebesgue:
        s.add(a.weight * integrate_cube(f, m, cube_rule));
        break;
      case Atom::Kind::kLine: {
        const QuadratureRule rule = uniform_composite_rule(64, 8);
        std::vector<double> p(m);
        CompensatedSum line;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          for (int j = 0; j < m; ++j) p[j] = a.line.at(j, rule.nodes[i]);
          line.add(rule.weights[i] * f(p));
        }
        s.add(a.weight * line.value());
        break;
      }
      case Atom::Kind::kPoint:
        s.add(a.weight * f(a.point));
        break;
    }
  }
  return s.value();
}

double integrate_against(const MeasureSpec& mu, const CubeFunction& f) {
  return integrate_against(mu, f, default_cube_rule(mu.dimension()));
}

}  // namespace greencube
