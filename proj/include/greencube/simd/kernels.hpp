#pragma once

// Data-parallel inner loops. Every backend accumulates in four interleaved
// lanes combined as (l0 + l1) + (l2 + l3), followed by a sequential tail, so
// the scalar reference and the vector variants produce bit-identical results.
//
// Point sets are column-major: coordinate j of point i lives at
// cols[j * stride + i].

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace greencube::simd {

// One summand a_U * K_{U^c} * k_U of the Green kernel.
struct KernelTerm {
  std::uint32_t bits;  // U
  double coeff;        // a_U
};

struct KernelView {
  int m;
  std::span<const KernelTerm> terms;
};

using GreenRowFn = void (*)(const KernelView& kernel, const double* x, const double* cols,
                            std::size_t stride, std::size_t count, double* out);
using TiedDownSumFn = double (*)(const double* cols, std::size_t stride, std::size_t n, int m,
                                 const double* x);
using CountDominatedFn = std::size_t (*)(const double* cols, std::size_t stride, std::size_t n,
                                         std::uint32_t coords, const double* x);
using DotFn = double (*)(const double* a, const double* b, std::size_t n);

struct KernelTable {
  std::string_view name;
  // out[i] = G(x, point_i).
  GreenRowFn green_row;
  // sum_i prod_j (1[X_ij <= x_j] - x_j).
  TiedDownSumFn tied_down_sum;
  // #{i : X_ij <= x_j for every j in coords}; coords is a bitmask.
  CountDominatedFn count_dominated;
  DotFn dot;
};

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend b);
bool backend_available(Backend b);

// Best backend for this CPU. GREENCUBE_SIMD=scalar in the environment forces
// the reference path.
Backend detected_backend();

const KernelTable& table(Backend b);
const KernelTable& active();
Backend active_backend();
// Test hook; throws ValidationError when the backend is unavailable.
void set_active_backend(Backend b);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(GREENCUBE_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(GREENCUBE_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace greencube::simd
