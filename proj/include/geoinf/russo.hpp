#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geoinf/baselines.hpp"
#include "geoinf/bounds.hpp"
#include "geoinf/measure.hpp"
#include "geoinf/monte_carlo.hpp"
#include "geoinf/set_model.hpp"

namespace geoinf {

/// alpha -> m_alpha^{⊗n}(A) on a grid, all points from one sample batch
/// (x + alpha 1 with x drawn once), so the curve of an increasing set is
/// monotone sample by sample.
struct ThresholdCurve {
  std::vector<double> alpha;
  std::vector<Estimate> values;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

ThresholdCurve measure_curve(const SetDescriptor& a, const Measure1D& m, const std::vector<double>& alpha_grid,
                             const McConfig& cfg);

struct RussoCheck {
  double alpha = 0.0;
  double finite_difference = 0.0;  // Richardson-combined central difference
  double fd_std_error = 0.0;
  double influence_sum = 0.0;      // sum_i I_i^G under m_alpha^{⊗n}
  double influence_std_error = 0.0;
  double discrepancy = 0.0;        // finite_difference - influence_sum
  double combined_std_error = 0.0; // of the per-sample discrepancy
  bool pass = false;               // |discrepancy| <= 2% |influence_sum| + 3 combined_std_error
};

/// Central differences with steps 1e-2 and 1e-3, combined by Richardson
/// extrapolation, against the influence sum at the same alpha.
RussoCheck russo_check(const SetDescriptor& a, const Measure1D& m, double alpha, const McConfig& cfg);

/// Root of m_alpha^{⊗n}(A) = delta on [-20, 20] by bisection on the
/// common-sample curve. Throws DomainError if the curve does not cross delta.
double threshold_alpha(const SetDescriptor& a, const Measure1D& m, double delta, const McConfig& cfg);

/// Closed form for {max_i x_i > K} under a symmetric m:
/// alpha = K - quantile((1 - delta)^{1/n}).
double max_threshold_alpha(double level, std::size_t n, double delta, const Measure1D& m);

/// Width alpha(1 - eps) - alpha(eps) against log(1 / 2 eps) / sqrt(log n),
/// upper direction, baseline key `width`.
BoundReport width_report(double width, std::size_t n, double eps, const Baselines& baselines,
                         std::uint64_t seed = 0);
/// Measured width of an increasing set under gaussian(alpha, 1).
BoundReport width_check(const SetDescriptor& a, double eps, const McConfig& cfg, const Baselines& baselines);
/// Closed-form width of the max-threshold family (independent of K).
double max_threshold_width(std::size_t n, double eps);

struct PowerReport {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double beta = 0.0;
  std::size_t n = 0;
  double critical = 0.0;  // K
  double power = 0.0;
};

/// Test rejecting when max_i X_i > K for X_i ~ N(theta, 1) i.i.d., with
/// K = theta0 + quantile((1 - beta)^{1/n}). Requires theta1 >= theta0.
PowerReport max_test_power(double theta0, double theta1, double beta, std::size_t n);

/// Separation c log(1 / 2 beta) / sqrt(log n).
double power_separation(double c, double beta, std::size_t n);

}  // namespace geoinf
