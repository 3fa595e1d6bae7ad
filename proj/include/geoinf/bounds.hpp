#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geoinf/baselines.hpp"
#include "geoinf/influence.hpp"
#include "geoinf/interval_union.hpp"
#include "geoinf/measure.hpp"
#include "geoinf/monte_carlo.hpp"
#include "geoinf/set_model.hpp"

namespace geoinf {

/// Which factor measure a bound is stated for. The Gaussian uses the
/// exponent of rho = 2; the variance difference lands in the constant.
struct Regime {
  double rho = 2.0;
  bool gaussian = true;

  static Regime boltzmann(double rho);
  static Regime standard_gaussian() { return {2.0, true}; }

  /// 1 - 1/rho
  double exponent() const noexcept { return 1.0 - 1.0 / rho; }
  Measure1D measure() const;
  /// "gaussian" or "rho<value>", used as the baseline key suffix.
  std::string context() const;
};

enum class BoundDirection {
  lower,  // lhs >= c * rhs; pass iff implied >= baseline
  upper,  // lhs <= c * rhs; pass iff implied <= baseline
};

struct BoundContext {
  std::size_t n = 0;
  std::string regime;
  double t = 0.0;
  std::uint64_t seed = 0;
};

struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs_at_c1 = 0.0;
  double implied_constant = 0.0;
  double baseline_constant = 0.0;
  bool pass = false;
  BoundDirection direction = BoundDirection::lower;
  BoundContext context;
  bool precondition_ok = true;
  std::string note;
};

/// Fills implied_constant and pass. A zero rhs gives the largest finite
/// double as implied constant for lower bounds (the bound holds trivially).
BoundReport make_report(std::string name, double lhs, double rhs_at_c1, double baseline, BoundDirection dir,
                        BoundContext ctx);

// ------------------------------------------------------------ boundary

struct BoundaryEstimate {
  std::vector<double> r;          // as given (decreasing)
  std::vector<Estimate> per_r;    // (mu(A + [-r,r]^n) - mu(A)) / r
  Estimate limit;                 // linear extrapolation to r = 0
  Estimate measure;               // mu(A)
  Estimate influence_sum;         // sum_i I_i^G(A), same samples
  double difference_std_error = 0.0;  // of limit - influence_sum
};

inline const std::vector<double>& default_r_schedule() {
  static const std::vector<double> r{1e-1, 3e-2, 1e-2, 3e-3};
  return r;
}

/// Finite differences of the uniform enlargement on common samples, and a
/// linear-in-r extrapolation from the two smallest radii.
/// Throws CapabilityError when `a` cannot be enlarged.
BoundaryEstimate boundary_estimate(const SetDescriptor& a, const ProductSpace& space,
                                   const std::vector<double>& r_schedule, const McConfig& cfg);

// ------------------------------------------------------ influence bounds

/// lhs = max_i I_i, rhs = t(1-t)(log n)^{1-1/rho}/n. Throws for n < 2.
BoundReport check_kkl(std::span<const double> influences, double t, const Regime& regime,
                      const Baselines& baselines, std::uint64_t seed = 0);

/// lhs = sum_i I_i / (-log I_i)^{1-1/rho}, rhs = t(1-t). Terms with I_i = 0
/// vanish; for I_i >= 1 the log factor is replaced by 1 and the
/// precondition flag is cleared.
BoundReport check_talagrand_sum(std::span<const double> influences, double t, const Regime& regime,
                                const Baselines& baselines, std::uint64_t seed = 0);

/// lhs = sum_i I_i, rhs = t(1-t)(-log alpha)^{1-1/rho}; flags max I_i > alpha.
BoundReport check_lowmax_sum(std::span<const double> influences, double t, double alpha, const Regime& regime,
                             const Baselines& baselines, std::uint64_t seed = 0);

struct JuntaResult {
  std::size_t k = 0;
  std::vector<std::size_t> coordinates;  // in selection order
  SetPtr approximant;
  Estimate symmdiff;
  double s = 0.0;  // sum_i I_i (-log I_i)^{1/rho}
  bool success = false;
  BoundReport report;  // log k against s / eps, upper direction
};

/// Cylinder approximation of a monotone set by its most influential
/// coordinates. The approximant is the majority vote of A over 1000 fixed
/// inner draws of the remaining coordinates. k is searched by doubling and
/// then bisection.
JuntaResult junta_approx(const SetDescriptor& a, const ProductSpace& space, double eps, const McConfig& cfg,
                         const Regime& regime, const Baselines& baselines);

// ------------------------------------------------------ isoperimetry

/// Exact check of nu(S + [-r, r]) >= cdf(quantile(t) + r), t = nu(S),
/// to 1e-10. The implied constant is lhs / rhs with baseline 1.
BoundReport check_1d_iso(const IntervalUnion& s, const Measure1D& m, double r);

/// Test case number `index` of a reproducible family of 1 to 4 piece unions
/// mixing segments, rays and single points.
IntervalUnion random_interval_union(std::uint64_t seed, std::uint64_t index);

struct TransitiveIsoResult {
  BoundReport report;
  BoundaryEstimate boundary;
  bool small_t = false;       // t(1-t) <= 1/n
  double implied_k = 0.0;     // limit / iso_profile(t), filled when small_t
};

/// lhs = boundary limit, rhs = t(1-t)(log n)^{1-1/rho} with t measured.
/// For t(1-t) <= 1/n also reports limit / h(t) with h the isoperimetric
/// profile of the regime measure, checked against `dimfree_k`.
TransitiveIsoResult check_transitive_iso(const SetDescriptor& a, const ProductSpace& space,
                                         const std::vector<double>& r_schedule, const McConfig& cfg,
                                         const Regime& regime, const Baselines& baselines);

struct BoxExact {
  std::size_t n = 0;
  double a_n = 0.0;
  double influence = 0.0;
  double sum = 0.0;
};

/// a_n with cdf(a_n)^n = 1/2 and I_i = (1/2)^{(n-1)/n} density(a_n).
BoxExact box_exact(std::size_t n, const Measure1D& m);
/// The box prod (-inf, a_n] itself.
SetDescriptor box_family(std::size_t n, const Measure1D& m);

}  // namespace geoinf
