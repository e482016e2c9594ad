#include <algorithm>

#include "greencube/simd/kernels.hpp"

namespace greencube::simd {
namespace {

void green_row_scalar(const KernelView& kernel, const double* x, const double* cols,
                      std::size_t stride, std::size_t count, double* out) {
  const int m = kernel.m;
  double mins[32];
  double prods[32];
  for (std::size_t i = 0; i < count; ++i) {
    for (int j = 0; j < m; ++j) {
      const double xi = cols[j * stride + i];
      mins[j] = std::min(x[j], xi);
      prods[j] = x[j] * xi;
    }
    double full = mins[0];
    for (int j = 1; j < m; ++j) full *= mins[j];
    double acc = 0.0;
    for (const auto& term : kernel.terms) {
      double t = term.coeff;
      for (int j = 0; j < m; ++j) t *= ((term.bits >> j) & 1u) ? prods[j] : mins[j];
      acc += t;
    }
    out[i] = full - acc;
  }
}

inline double tied_down_term(const double* cols, std::size_t stride, std::size_t i, int m,
                             const double* x) {
  double p = 1.0;
  for (int j = 0; j < m; ++j) {
    const double ind = cols[j * stride + i] <= x[j] ? 1.0 : 0.0;
    p *= ind - x[j];
  }
  return p;
}

double tied_down_sum_scalar(const double* cols, std::size_t stride, std::size_t n, int m,
                            const double* x) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; ++i) lane[i & 3] += tied_down_term(cols, stride, i, m, x);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = n4; i < n; ++i) s += tied_down_term(cols, stride, i, m, x);
  return s;
}

std::size_t count_dominated_scalar(const double* cols, std::size_t stride, std::size_t n,
                                   std::uint32_t coords, const double* x) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool below = true;
    for (std::uint32_t c = coords; c != 0; c &= c - 1) {
      const int j = __builtin_ctz(c);
      below = below && cols[j * stride + i] <= x[j];
    }
    count += below ? 1 : 0;
  }
  return count;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; ++i) lane[i & 3] += a[i] * b[i];
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable = {"scalar", &green_row_scalar, &tied_down_sum_scalar,
                                  &count_dominated_scalar, &dot_scalar};
}

}  // namespace greencube::simd
