// Compiled with -mavx2 (no FMA). Only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "greencube/simd/kernels.hpp"

namespace greencube::simd {
namespace {

inline double combine_lanes(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void green_row_avx2(const KernelView& kernel, const double* x, const double* cols,
                    std::size_t stride, std::size_t count, double* out) {
  const int m = kernel.m;
  __m256d xv[32];
  for (int j = 0; j < m; ++j) xv[j] = _mm256_set1_pd(x[j]);

  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d mins[32];
    __m256d prods[32];
    for (int j = 0; j < m; ++j) {
      const __m256d xi = _mm256_loadu_pd(cols + j * stride + i);
      // std::min(a, b) returns a unless b < a; _mm256_min_pd(b, a) does the same.
      mins[j] = _mm256_min_pd(xi, xv[j]);
      prods[j] = _mm256_mul_pd(xv[j], xi);
    }
    __m256d full = _mm256_set1_pd(1.0);
    for (int j = 0; j < m; ++j) full = _mm256_mul_pd(full, mins[j]);
    __m256d acc = _mm256_setzero_pd();
    for (const auto& term : kernel.terms) {
      __m256d t = _mm256_set1_pd(term.coeff);
      for (int j = 0; j < m; ++j) {
        t = _mm256_mul_pd(t, ((term.bits >> j) & 1u) ? prods[j] : mins[j]);
      }
      acc = _mm256_add_pd(acc, t);
    }
    _mm256_storeu_pd(out + i, _mm256_sub_pd(full, acc));
  }
  if (i < count) {
    detail::kScalarTable.green_row(kernel, x, cols + i, stride, count - i, out + i);
  }
}

double tied_down_sum_avx2(const double* cols, std::size_t stride, std::size_t n, int m,
                          const double* x) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d p = one;
    for (int j = 0; j < m; ++j) {
      const __m256d xj = _mm256_set1_pd(x[j]);
      const __m256d v = _mm256_loadu_pd(cols + j * stride + i);
      const __m256d ind = _mm256_and_pd(_mm256_cmp_pd(v, xj, _CMP_LE_OQ), one);
      p = _mm256_mul_pd(p, _mm256_sub_pd(ind, xj));
    }
    acc = _mm256_add_pd(acc, p);
  }
  double s = combine_lanes(acc);
  for (std::size_t i = n4; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j < m; ++j) {
      const double ind = cols[j * stride + i] <= x[j] ? 1.0 : 0.0;
      p *= ind - x[j];
    }
    s += p;
  }
  return s;
}

std::size_t count_dominated_avx2(const double* cols, std::size_t stride, std::size_t n,
                                 std::uint32_t coords, const double* x) {
  std::size_t count = 0;
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d all = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d below = all;
    for (std::uint32_t c = coords; c != 0; c &= c - 1) {
      const int j = __builtin_ctz(c);
      const __m256d v = _mm256_loadu_pd(cols + j * stride + i);
      below = _mm256_and_pd(below, _mm256_cmp_pd(v, _mm256_set1_pd(x[j]), _CMP_LE_OQ));
    }
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(below)));
  }
  if (n4 < n) {
    count += detail::kScalarTable.count_dominated(cols + n4, stride, n - n4, coords, x);
  }
  return count;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double s = combine_lanes(acc);
  for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table = {"avx2", &green_row_avx2, &tied_down_sum_avx2,
                                &count_dominated_avx2, &dot_avx2};
}

}  // namespace greencube::simd
