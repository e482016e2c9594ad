#include <atomic>
#include <cstdlib>
#include <string>

#include "greencube/error.hpp"
#include "greencube/simd/kernels.hpp"

namespace greencube::simd {
namespace {

bool cpu_has_avx2() {
#if defined(GREENCUBE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* forced = std::getenv("GREENCUBE_SIMD")) {
    if (std::string(forced) == "scalar") return Backend::kScalar;
  }
#if defined(GREENCUBE_HAVE_NEON)
  return Backend::kNeon;
#else
  return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
#endif
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> t{&table(detected_backend())};
  return t;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::kScalar: return true;
    case Backend::kAvx2: return cpu_has_avx2();
    case Backend::kNeon:
#if defined(GREENCUBE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detected_backend() {
  static const Backend b = detect();
  return b;
}

const KernelTable& table(Backend b) {
  if (!backend_available(b)) {
    throw ValidationError("SIMD backend " + std::string(backend_name(b)) +
                          " is not available on this machine");
  }
  switch (b) {
#if defined(GREENCUBE_HAVE_AVX2)
    case Backend::kAvx2: return detail::kAvx2Table;
#endif
#if defined(GREENCUBE_HAVE_NEON)
    case Backend::kNeon: return detail::kNeonTable;
#endif
    default: return detail::kScalarTable;
  }
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

Backend active_backend() {
  const KernelTable* t = &active();
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (backend_available(b) && &table(b) == t) return b;
  }
  return Backend::kScalar;
}

void set_active_backend(Backend b) { current().store(&table(b), std::memory_order_release); }

}  // namespace greencube::simd
