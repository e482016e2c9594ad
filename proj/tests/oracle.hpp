// Independent reference implementations used only by the tests. They share
// no code with the library beyond plain data types.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace oracle {

inline int popcount(std::uint32_t b) { return __builtin_popcount(b); }

// a_U from the recurrence, written against a std::map keyed by bitmask.
inline std::map<std::uint32_t, std::int64_t> coefficients(const std::vector<std::uint32_t>& family,
                                                          int m) {
  std::map<std::uint32_t, std::int64_t> a;
  for (int size = 1; size <= m; ++size) {
    for (std::uint32_t u : family) {
      if (popcount(u) != size) continue;
      std::int64_t s = 0;
      for (const auto& [v, av] : a) {
        if (v != u && (v & u) == v) s += av;
      }
      a[u] = 1 - s;
    }
  }
  return a;
}

inline double green(const std::map<std::uint32_t, std::int64_t>& a, const std::vector<double>& x,
                    const std::vector<double>& xi) {
  const int m = static_cast<int>(x.size());
  double full = 1.0;
  for (int j = 0; j < m; ++j) full *= std::min(x[j], xi[j]);
  double s = 0.0;
  for (const auto& [u, au] : a) {
    double t = double(au);
    for (int j = 0; j < m; ++j) t *= ((u >> j) & 1u) ? x[j] * xi[j] : std::min(x[j], xi[j]);
    s += t;
  }
  return full - s;
}

// Largest eigenvalue of a 1-D kernel by midpoint Nystrom with n nodes.
inline double top_eigenvalue_1d(const std::function<double(double, double)>& k, int n) {
  Eigen::MatrixXd a(n, n);
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = h * k((i + 0.5) * h, (j + 0.5) * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// Rows are observations (x1, x2).
using Sample2 = std::vector<std::array<double, 2>>;

inline double joint_edf(const Sample2& d, double x1, double x2) {
  int c = 0;
  for (const auto& p : d) c += (p[0] <= x1 && p[1] <= x2);
  return double(c) / double(d.size());
}

inline double marginal_edf(const Sample2& d, int j, double t) {
  int c = 0;
  for (const auto& p : d) c += p[j] <= t;
  return double(c) / double(d.size());
}

// Breakpoints of axis j: 0, data, 1 (sorted).
inline std::vector<double> cuts(const Sample2& d, int j) {
  std::vector<double> c{0.0, 1.0};
  for (const auto& p : d) c.push_back(p[j]);
  std::sort(c.begin(), c.end());
  return c;
}

// B^1_{V,n} for m = 2 by explicit cell decomposition. known_mask bit j set
// means Lebesgue on coordinate j, otherwise the empirical margin.
inline double stat_B1(const Sample2& d, unsigned known_mask) {
  const double n = double(d.size());
  const bool k1 = known_mask & 1u, k2 = known_mask & 2u;
  double total = 0.0;
  if (k1 && k2) {
    const auto c1 = cuts(d, 0), c2 = cuts(d, 1);
    for (std::size_t a = 0; a + 1 < c1.size(); ++a) {
      for (std::size_t b = 0; b + 1 < c2.size(); ++b) {
        const double l1 = c1[a], r1 = c1[a + 1], l2 = c2[b], r2 = c2[b + 1];
        // F_n is constant on the open cell and equals its value at the lower corner.
        const double f = joint_edf(d, l1, l2);
        total += f * (r1 - l1) * (r2 - l2) - (r1 * r1 - l1 * l1) / 2 * (r2 * r2 - l2 * l2) / 2;
      }
    }
    return total;
  }
  if (!k1 && !k2) {
    for (const auto& p : d) {
      for (const auto& q : d) {
        total += joint_edf(d, p[0], q[1]) - marginal_edf(d, 0, p[0]) * marginal_edf(d, 1, q[1]);
      }
    }
    return total / (n * n);
  }
  const int leb = k1 ? 0 : 1, emp = 1 - leb;
  const auto c = cuts(d, leb);
  for (const auto& q : d) {
    const double t = q[emp];
    for (std::size_t a = 0; a + 1 < c.size(); ++a) {
      const double l = c[a], r = c[a + 1];
      const double f = leb == 0 ? joint_edf(d, l, t) : joint_edf(d, t, l);
      total += f * (r - l) - (r * r - l * l) / 2 * marginal_edf(d, emp, t);
    }
  }
  return total / n;
}

// Composite Simpson on [0,1]^m by nested loops (m <= 3), n even.
inline double simpson_cube(const std::function<double(const std::vector<double>&)>& f, int m,
                           int n) {
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  const double h = 1.0 / n;
  std::vector<double> x(m);
  double s = 0.0;
  std::vector<int> idx(m, 0);
  while (true) {
    double wt = 1.0;
    for (int j = 0; j < m; ++j) {
      x[j] = idx[j] * h;
      wt *= w[idx[j]] * h / 3.0;
    }
    s += wt * f(x);
    int j = 0;
    while (j < m && ++idx[j] > n) idx[j++] = 0;
    if (j == m) break;
  }
  return s;
}

inline std::vector<double> random_point(std::mt19937_64& g, int m, double lo = 0.0,
                                        double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(m);
  for (double& v : x) v = u(g);
  return x;
}

// Closed-form optimal shape for the known-margin-free family and Lebesgue
// measure: prod x_j (prod (2 - x_j) + sum x_j - (m + 1)).
inline double op_shape(const std::vector<double>& x) {
  double px = 1.0, p2 = 1.0, s = 0.0;
  for (double v : x) {
    px *= v;
    p2 *= 2.0 - v;
    s += v;
  }
  return px * (p2 + s - double(x.size() + 1));
}

// Footrule-optimal cubic (diagonal measure, m = 2).
inline double footrule_shape(const std::vector<double>& x) {
  const double a = x[0], b = x[1];
  return std::pow(std::abs(a - b), 3) - std::pow(a + b, 3) + 2 * a * b * (a * a + b * b + 2);
}

// Gini-optimal cubic in the closed form under test.
inline double gini_shape_printed(const std::vector<double>& x) {
  const double a = x[0], b = x[1];
  return std::pow(std::abs(a - b), 3) - std::pow(std::abs(a + b - 1), 3) - 3 * (a * a + b * b) +
         3 * (a + b - 1);
}

// Gini-optimal cubic as derived from the Green function: 12 lambda Omega.
inline double gini_shape_corrected(const std::vector<double>& x) {
  const double a = x[0], b = x[1];
  return std::pow(std::abs(a - b), 3) + std::pow(std::abs(a + b - 1), 3) - 3 * (a * a + b * b) +
         3 * (a + b - 1) + 2;
}

}  // namespace oracle
