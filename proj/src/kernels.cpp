#include "geoinf/kernels.hpp"

#include <atomic>
#include <limits>

namespace geoinf::simd {

#if defined(GEOINF_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;  // kernels_avx2.cpp
#endif

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

std::size_t count_greater_scalar(const double* x, const double* bound, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] > bound[i] ? 1 : 0;
  return c;
}

Max2 max2_scalar(const double* x, std::size_t n) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  Max2 r{kNegInf, 0, kNegInf};
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > r.first) {
      r.second = r.first;
      r.first = x[i];
      r.arg_first = i;
    } else if (x[i] > r.second) {
      r.second = x[i];
    }
  }
  return r;
}

void affine_thresholds_scalar(const double* x, const double* u, double residual, double* out,
                              std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + residual / u[i];
}

constexpr KernelTable kScalar{Isa::scalar,          dot_scalar,
                              sum_scalar,           squared_distance_scalar,
                              count_greater_scalar, max2_scalar,
                              affine_thresholds_scalar};

bool cpu_has_avx2() noexcept {
#if defined(GEOINF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  if (const KernelTable* t = avx2_kernels()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*> g_active{initial_table()};

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() noexcept { return kScalar; }

const KernelTable* avx2_kernels() noexcept {
#if defined(GEOINF_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

Isa detected_isa() noexcept { return avx2_kernels() ? Isa::avx2 : Isa::scalar; }

const KernelTable& active() noexcept { return *g_active.load(std::memory_order_relaxed); }

bool select(Isa isa) noexcept {
  const KernelTable* t = isa == Isa::avx2 ? avx2_kernels() : &kScalar;
  if (!t) return false;
  g_active.store(t, std::memory_order_relaxed);
  return true;
}

}  // namespace geoinf::simd
