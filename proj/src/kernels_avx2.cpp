// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include <bit>
#include <limits>

#include "geoinf/kernels.hpp"

namespace geoinf::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t count_greater_avx2(const double* x, const double* bound, std::size_t n) {
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gt = _mm256_cmp_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(bound + i), _CMP_GT_OQ);
    c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(gt))));
  }
  for (; i < n; ++i) c += x[i] > bound[i] ? 1 : 0;
  return c;
}

double range_max(const double* x, std::size_t begin, std::size_t end) {
  double m = -std::numeric_limits<double>::infinity();
  __m256d acc = _mm256_set1_pd(m);
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  m = hmax(acc);
  for (; i < end; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

Max2 max2_avx2(const double* x, std::size_t n) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (n == 0) return {kNegInf, 0, kNegInf};
  const double first = range_max(x, 0, n);
  std::size_t arg = 0;
  while (arg < n && !(x[arg] == first)) ++arg;
  if (arg == n) arg = 0;  // all NaN; mirror scalar behaviour loosely
  const double left = range_max(x, 0, arg);
  const double right = range_max(x, arg + 1, n);
  return {first, arg, left > right ? left : right};
}

void affine_thresholds_avx2(const double* x, const double* u, double residual, double* out,
                            std::size_t n) {
  const __m256d r = _mm256_set1_pd(residual);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d q = _mm256_div_pd(r, _mm256_loadu_pd(u + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), q));
  }
  for (; i < n; ++i) out[i] = x[i] + residual / u[i];
}

constexpr KernelTable kAvx2{Isa::avx2,         dot_avx2,
                            sum_avx2,          squared_distance_avx2,
                            count_greater_avx2, max2_avx2,
                            affine_thresholds_avx2};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace geoinf::simd
