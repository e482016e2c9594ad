// AArch64 variant. Two float64x2 registers give the same four-lane layout as
// the AVX2 kernels; NEON is baseline on AArch64 so no runtime check is needed.
#include <arm_neon.h>

#include <algorithm>

#include "greencube/simd/kernels.hpp"

namespace greencube::simd {
namespace {

inline double combine_lanes(float64x2_t lo, float64x2_t hi) {
  return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
         (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

void green_row_neon(const KernelView& kernel, const double* x, const double* cols,
                    std::size_t stride, std::size_t count, double* out) {
  const int m = kernel.m;
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    float64x2_t mins[32];
    float64x2_t prods[32];
    for (int j = 0; j < m; ++j) {
      const float64x2_t xj = vdupq_n_f64(x[j]);
      const float64x2_t xi = vld1q_f64(cols + j * stride + i);
      // Equal inputs give equal outputs, so operand order does not matter here.
      mins[j] = vminq_f64(xj, xi);
      prods[j] = vmulq_f64(xj, xi);
    }
    float64x2_t full = mins[0];
    for (int j = 1; j < m; ++j) full = vmulq_f64(full, mins[j]);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (const auto& term : kernel.terms) {
      float64x2_t t = vdupq_n_f64(term.coeff);
      for (int j = 0; j < m; ++j) {
        t = vmulq_f64(t, ((term.bits >> j) & 1u) ? prods[j] : mins[j]);
      }
      acc = vaddq_f64(acc, t);
    }
    vst1q_f64(out + i, vsubq_f64(full, acc));
  }
  if (i < count) {
    detail::kScalarTable.green_row(kernel, x, cols + i, stride, count - i, out + i);
  }
}

inline float64x2_t tied_down_pair(const double* cols, std::size_t stride, std::size_t i, int m,
                                  const double* x) {
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t p = one;
  for (int j = 0; j < m; ++j) {
    const float64x2_t xj = vdupq_n_f64(x[j]);
    const uint64x2_t le = vcleq_f64(vld1q_f64(cols + j * stride + i), xj);
    const float64x2_t ind =
        vreinterpretq_f64_u64(vandq_u64(le, vreinterpretq_u64_f64(one)));
    p = vmulq_f64(p, vsubq_f64(ind, xj));
  }
  return p;
}

double tied_down_sum_neon(const double* cols, std::size_t stride, std::size_t n, int m,
                          const double* x) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    lo = vaddq_f64(lo, tied_down_pair(cols, stride, i, m, x));
    hi = vaddq_f64(hi, tied_down_pair(cols, stride, i + 2, m, x));
  }
  double s = combine_lanes(lo, hi);
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

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double s = combine_lanes(lo, hi);
  for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

namespace detail {
// Dominated counts are integer-valued; the scalar loop is kept.
const KernelTable kNeonTable = {"neon", &green_row_neon, &tied_down_sum_neon,
                                kScalarTable.count_dominated, &dot_neon};
}

}  // namespace greencube::simd
