#pragma once

#include <cstddef>
#include <string_view>

// Per-sample arithmetic behind fiber extraction. Every kernel has a scalar
// reference version and (on x86-64) an AVX2/FMA version; the active table is
// chosen once at startup from CPUID and can be overridden for testing.

namespace geoinf::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct Max2 {
  double first;
  std::size_t arg_first;  // lowest index attaining `first`
  double second;          // max over all indices except arg_first (-inf if n < 2)
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  /// Number of j with x[j] > bound[j].
  std::size_t (*count_greater)(const double* x, const double* bound, std::size_t n);
  Max2 (*max2)(const double* x, std::size_t n);
  /// out[i] = x[i] + residual / u[i]; entries with u[i] == 0 are unspecified.
  void (*affine_thresholds)(const double* x, const double* u, double residual, double* out,
                            std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

/// Best ISA the running CPU supports.
Isa detected_isa() noexcept;
const KernelTable& active() noexcept;
/// Force a kernel set; returns false (and changes nothing) if unavailable.
bool select(Isa isa) noexcept;

}  // namespace geoinf::simd
