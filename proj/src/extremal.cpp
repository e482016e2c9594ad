#include "greencube/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "greencube/error.hpp"
#include "greencube/parallel.hpp"

namespace greencube {

DependenceFunction::DependenceFunction(int m, CubeFunction value)
    : m_(m), value_(std::move(value)) {
  check_dimension(m);
  if (!value_) throw ValidationError("dependence function needs an evaluator");
}

DependenceFunction& DependenceFunction::with_density(CubeFunction density) {
  density_ = std::move(density);
  return *this;
}

DependenceFunction& DependenceFunction::with_face(SubsetMask u, CubeFunction restricted) {
  if (u.dimension() != m_) throw ValidationError("face mask dimension mismatch");
  faces_[u.bits()] = std::move(restricted);
  return *this;
}

DependenceFunction& DependenceFunction::require_explicit_faces() {
  explicit_faces_ = true;
  return *this;
}

double DependenceFunction::face(SubsetMask u, std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  for (int j = 0; j < m_; ++j) {
    if (u.contains(j)) y[j] = 1.0;
  }
  if (auto it = faces_.find(u.bits()); it != faces_.end()) return it->second(y);
  if (explicit_faces_) {
    throw ValidationError("missing face evaluator for x_U = 1 with U = " + u.to_string());
  }
  return value_(y);
}

DependenceFunction DependenceFunction::scaled(double c) const {
  DependenceFunction out(m_, [v = value_, c](std::span<const double> x) { return c * v(x); });
  if (density_) {
    out.density_ = [d = *density_, c](std::span<const double> x) { return c * d(x); };
  }
  for (const auto& [bits, fn] : faces_) {
    out.faces_[bits] = [fn, c](std::span<const double> x) { return c * fn(x); };
  }
  out.explicit_faces_ = explicit_faces_;
  return out;
}

double integrate_dependence(const DependenceFunction& f) {
  return integrate_cube([&](std::span<const double> x) { return f(x); }, f.dimension(),
                        default_cube_rule(f.dimension()));
}

void check_copula_boundary(const DependenceFunction& f, double tol) {
  const int m = f.dimension();
  const double base[] = {0.2, 0.5, 0.8};
  const PointSet interior = tensor_grid(m, base);
  double scale = 1.0;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    scale = std::max(scale, std::abs(f(interior.point(i))));
  }
  auto fail = [&](const std::vector<double>& x, double v) {
    std::string where = "(";
    for (int j = 0; j < m; ++j) where += (j ? "," : "") + std::to_string(x[j]);
    throw ValidationError("dependence function does not vanish on the boundary: value " +
                          std::to_string(v) + " at " + where + ")");
  };
  for (std::size_t i = 0; i < interior.size(); ++i) {
    for (int k = 0; k < m; ++k) {
      auto x = interior.point(i);
      x[k] = 0.0;
      if (const double v = f(x); std::abs(v) > tol * scale) fail(x, v);
      // Right face: every coordinate but k pinned at 1.
      auto y = interior.point(i);
      for (int j = 0; j < m; ++j) {
        if (j != k) y[j] = 1.0;
      }
      if (const double v = f(y); std::abs(v) > tol * scale) fail(y, v);
    }
  }
}

ExtremalSolution::ExtremalSolution(GreenKernel kernel, MeasureSpec mu, double lambda)
    : kernel_(std::move(kernel)), mu_(std::move(mu)), lambda_(lambda) {}

double ExtremalSolution::omega(std::span<const double> x) const {
  return integrate_kernel_once(kernel_, mu_, x) / lambda_;
}

double ExtremalSolution::omega_density(std::span<const double> x) const {
  return integrate_kernel_density_once(kernel_, mu_, x) / lambda_;
}

DependenceFunction ExtremalSolution::as_dependence_function() const {
  // Copies keep the function valid after the solution goes away.
  auto self = std::make_shared<const ExtremalSolution>(*this);
  DependenceFunction f(kernel_.dimension(),
                       [self](std::span<const double> x) { return self->omega(x); });
  f.with_density([self](std::span<const double> x) { return self->omega_density(x); });
  return f;
}

ExtremalSolution solve(const MonotoneFamily& family, const MeasureSpec& mu, LambdaMethod method) {
  GreenKernel kernel(family);
  const double lam = lambda(kernel, mu, method);
  // lambda is a squared norm; scale the threshold by the total mass squared.
  const double mass = mu.total_mass();
  if (!(lam > 1e-14 * mass * mass)) {
    throw ValidationError("degenerate measure: lambda = " + std::to_string(lam) +
                          " (the measure charges only faces where the kernel vanishes)");
  }
  return ExtremalSolution(std::move(kernel), mu, lam);
}

double minimal_norm_squared(const ExtremalSolution& sol) { return 1.0 / sol.lambda(); }

double mixed_derivative(const CubeFunction& f, std::span<const double> x, double h) {
  const int m = static_cast<int>(x.size());
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
  for (double v : x) {
    if (v - m * h < -1e-15 || v + m * h > 1.0 + 1e-15) {
      throw ValidationError("point " + std::to_string(v) + " is closer than m*h = " +
                            std::to_string(m * h) + " to the boundary");
    }
  }
  std::vector<double> y(m);
  double acc = 0.0;
  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    double sign = 1.0;
    for (int j = 0; j < m; ++j) {
      const bool plus = (s >> j) & 1u;
      y[j] = x[j] + (plus ? h : -h);
      if (!plus) sign = -sign;
    }
    acc += sign * f(y);
  }
  return acc / std::pow(2.0 * h, m);
}

double efficiency_coefficient(const MonotoneFamily& family, const MeasureSpec& mu) {
  return minimal_norm_squared(solve(family, mu));
}

double bahadur_slope_B1(SubsetMask known, int m, const DependenceFunction& f) {
  check_dimension(m);
  if (f.dimension() != m) throw ValidationError("dependence function dimension mismatch");
  check_copula_boundary(f);
  const GreenKernel kernel(family_for_known_margins(known, m));
  const double lam = lambda(kernel, MeasureSpec::lebesgue(m));
  const double integral = integrate_dependence(f);
  return integral * integral / lam;
}

SpearmanPitmanSlope pitman_slope_spearman(int m, const DependenceFunction& f) {
  if (m < 2) throw ValidationError("Spearman rho needs m >= 2");
  check_dimension(m);
  if (f.dimension() != m) throw ValidationError("dependence function dimension mismatch");
  const double two_m = std::pow(2.0, m);
  const double denom = two_m - m - 1.0;
  const double integral = integrate_dependence(f);
  const double mean_derivative = two_m * (m + 1.0) / denom * integral;
  const double variance =
      (m + 1.0) * (m + 1.0) * (std::pow(4.0 / 3.0, m) - m / 3.0 - 1.0) / (denom * denom);
  const double sigma = std::sqrt(variance);
  const double ratio = mean_derivative / sigma;
  return {mean_derivative, sigma, ratio * ratio};
}

double pitman_slope_bhat(int m, const DependenceFunction& f) {
  check_dimension(m);
  if (f.dimension() != m) throw ValidationError("dependence function dimension mismatch");
  CompensatedSum total;
  total.add(integrate_dependence(f));
  // Face terms: the integral of x_U * F0|_{x_U=1} factorizes into 2^{-|U|}
  // times an (m - |U|)-dimensional integral over the free coordinates.
  for (std::uint32_t bits = 1; bits < (1u << m); ++bits) {
    const SubsetMask u(bits, m);
    const int k = u.size();
    if (k > m - 2) continue;
    std::vector<int> free_coords;
    for (int j = 0; j < m; ++j) {
      if (!u.contains(j)) free_coords.push_back(j);
    }
    std::vector<double> x(m, 1.0);
    const double face_integral = integrate_cube(
        [&](std::span<const double> y) {
          for (std::size_t i = 0; i < free_coords.size(); ++i) x[free_coords[i]] = y[i];
          return f.face(u, x);
        },
        m - k, default_cube_rule(m - k));
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k-1}
    total.add(-sign * std::pow(0.5, k) * face_integral);
  }
  const double v = total.value();
  return std::pow(12.0, m) * v * v;
}

double fisher_info(const DependenceFunction& f, const FisherOptions& options) {
  const int m = f.dimension();
  const CubeRule rule = options.rule.value_or(default_cube_rule(m));
  auto check = [](double v) {
    if (!std::isfinite(v)) throw NumericalError("non-finite density estimate");
    return v;
  };
  if (options.use_density && f.density()) {
    const auto& density = *f.density();
    return integrate_cube(
        [&](std::span<const double> x) {
          const double d = check(density(x));
          return d * d;
        },
        m, rule);
  }
  const double h = options.step;
  const CubeFunction value = [&](std::span<const double> x) { return f(x); };
  auto shrunk = [&](double margin) {
    return integrate_cube(
        [&](std::span<const double> x) {
          const double d = check(mixed_derivative(value, x, h));
          return d * d;
        },
        m, rule, margin, 1.0 - margin);
  };
  // Quadratic extrapolation in the margin back to zero.
  const double margin = m * h;
  return 3.0 * shrunk(margin) - 3.0 * shrunk(2.0 * margin) + shrunk(3.0 * margin);
}

OptimalityGap optimality_gap(const MonotoneFamily& family, const MeasureSpec& mu,
                             const DependenceFunction& f, const FisherOptions& options) {
  if (f.dimension() != mu.dimension()) {
    throw ValidationError("dependence function dimension mismatch");
  }
  const GreenKernel kernel(family);
  const double lam = lambda(kernel, mu);
  const double pairing =
      integrate_against(mu, [&](std::span<const double> x) { return f(x); });
  const double index = pairing * pairing / lam;
  const double fisher = fisher_info(f, options);
  return {index, fisher, fisher - index};
}

namespace {

constexpr std::size_t kNystromCap = 20000;
constexpr std::size_t kDenseLimit = 4096;
constexpr double kPowerTolerance = 1e-12;
constexpr int kPowerMaxIterations = 100000;

}  // namespace

double nystrom_principal_eigenvalue(const GreenKernel& kernel, int grid_n, int threads,
                                    int* iterations) {
  const int m = kernel.dimension();
  if (grid_n < 1) throw ValidationError("grid_n must be positive");
  const QuadratureRule axis = gauss_legendre(grid_n);
  const PointSet nodes = tensor_grid(m, axis.nodes);
  const std::size_t n = nodes.size();
  if (n > kNystromCap) {
    throw ValidationError("Nystrom grid of " + std::to_string(n) + " nodes exceeds the cap of " +
                          std::to_string(kNystromCap));
  }
  std::vector<double> sqrt_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = i;
    double w = 1.0;
    for (int j = 0; j < m; ++j) {
      w *= axis.weights[r % grid_n];
      r /= grid_n;
    }
    sqrt_w[i] = std::sqrt(w);
  }

  const auto& kt = simd::active();
  const bool dense = n <= kDenseLimit;
  std::vector<double> matrix;
  auto fill_row = [&](std::size_t i, double* row) {
    std::vector<double> x = nodes.point(i);
    kt.green_row(kernel.view(), x.data(), nodes.data(), nodes.stride(), n, row);
    for (std::size_t k = 0; k < n; ++k) row[k] *= sqrt_w[i] * sqrt_w[k];
  };
  if (dense) {
    matrix.resize(n * n);
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) fill_row(i, matrix.data() + i * n);
    });
  }

  std::vector<double> v(sqrt_w);
  std::vector<double> av(n);
  auto normalize = [&](std::vector<double>& u) {
    const double norm = std::sqrt(kt.dot(u.data(), u.data(), n));
    for (double& c : u) c /= norm;
  };
  normalize(v);
  double estimate = 0.0;
  for (int it = 1; it <= kPowerMaxIterations; ++it) {
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
      std::vector<double> row(dense ? 0 : n);
      for (std::size_t i = b; i < e; ++i) {
        const double* r = matrix.data() + i * n;
        if (!dense) {
          fill_row(i, row.data());
          r = row.data();
        }
        av[i] = kt.dot(r, v.data(), n);
      }
    });
    const double rayleigh = kt.dot(v.data(), av.data(), n);
    if (!std::isfinite(rayleigh)) throw NumericalError("power iteration produced a non-finite value");
    const bool converged = it > 1 && std::abs(rayleigh - estimate) <= kPowerTolerance * std::abs(rayleigh);
    estimate = rayleigh;
    v.swap(av);
    normalize(v);
    if (converged) {
      if (iterations) *iterations = it;
      return estimate;
    }
  }
  throw NumericalError("power iteration did not converge in " +
                       std::to_string(kPowerMaxIterations) + " iterations");
}

EigenEstimate principal_eigenvalue(const GreenKernel& kernel, int grid_n, int threads) {
  const int m = kernel.dimension();
  if (grid_n < 8) throw ValidationError("grid_n must be >= 8");
  double fine_nodes = std::pow(2.0 * grid_n, m);
  if (fine_nodes > static_cast<double>(kNystromCap)) {
    throw ValidationError("(2*grid_n)^m = " + std::to_string(fine_nodes) +
                          " exceeds the Nystrom cap of " + std::to_string(kNystromCap));
  }
  const double coarse = nystrom_principal_eigenvalue(kernel, grid_n, threads);
  int iterations = 0;
  const double fine = nystrom_principal_eigenvalue(kernel, 2 * grid_n, threads, &iterations);
  // Error ~ C n^-2: one Richardson step.
  const double value = fine + (fine - coarse) / 3.0;
  return {value, coarse, fine, std::abs(value - coarse), grid_n, iterations};
}

}  // namespace greencube
