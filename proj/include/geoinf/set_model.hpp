#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "geoinf/interval_union.hpp"
#include "geoinf/matrix.hpp"
#include "geoinf/measure.hpp"
#include "geoinf/monte_carlo.hpp"

namespace geoinf {

enum class Monotonicity { increasing, decreasing };

/// Membership oracle. Must be a pure function of the point.
using Indicator = std::function<bool(std::span<const double>)>;

class SetDescriptor;
using SetPtr = std::shared_ptr<const SetDescriptor>;

namespace shape {

/// {x : <normal, x> <= offset}, normal of unit L2 norm.
struct Halfspace {
  std::vector<double> normal;
  double offset;
};
/// Lower orthant box ∏ (-inf, corner_i].
struct BoxLower {
  std::vector<double> corner;
};
/// Closed Euclidean ball.
struct Ball {
  std::vector<double> center;
  double radius;
};
/// Ball + [-h, h]^n (L-infinity enlargement of a ball).
struct CubeDilatedBall {
  std::vector<double> center;
  double radius;
  double half_width;
};
/// {x : max_i x_i > level}
struct MaxThreshold {
  std::size_t n;
  double level;
};
/// {x : sum_i x_i >= level}
struct SumThreshold {
  std::size_t n;
  double level;
};
/// g(base) = {g y : y in base} for orthogonal g.
struct Rotated {
  SetPtr base;
  SquareMatrix g;
};
struct Complement {
  SetPtr base;
};
struct MonotoneOracle {
  std::size_t n;
  Indicator indicator;
  Monotonicity direction;
};
/// Oracle with a promise that every fiber has at most `max_components` pieces
/// inside the scan window [window_lo, window_hi] (in units of the factor's
/// standard deviation around its mean).
struct GenericOracle {
  std::size_t n;
  Indicator indicator;
  std::size_t max_components;
  double window_lo;
  double window_hi;
};

}  // namespace shape

/// A Borel set A ⊆ R^n given by a structured shape or a membership oracle.
/// Immutable; nested descriptors are shared.
class SetDescriptor {
 public:
  using Kind = std::variant<shape::Halfspace, shape::BoxLower, shape::Ball, shape::CubeDilatedBall,
                            shape::MaxThreshold, shape::SumThreshold, shape::Rotated,
                            shape::Complement, shape::MonotoneOracle, shape::GenericOracle>;

  /// {x : <u, x> <= b}; (u, b) are rescaled so that |u|_2 = 1.
  static SetDescriptor halfspace(std::vector<double> u, double b);
  static SetDescriptor box_lower(std::vector<double> a);
  static SetDescriptor l2_ball(std::vector<double> center, double radius);
  static SetDescriptor cube_dilated_ball(std::vector<double> center, double radius, double half_width);
  static SetDescriptor max_threshold(std::size_t n, double level);
  static SetDescriptor sum_threshold(std::size_t n, double level);
  /// g must be orthogonal (not checked here; see haar_sample).
  static SetDescriptor rotated(SetDescriptor base, SquareMatrix g);
  static SetDescriptor complement(SetDescriptor base);
  /// Spot-checks monotonicity on 100 random fiber pairs; throws DomainError on violation.
  static SetDescriptor monotone_oracle(std::size_t n, Indicator indicator, Monotonicity direction);
  static SetDescriptor generic_oracle(std::size_t n, Indicator indicator, std::size_t max_components,
                                      double window_lo = -8.0, double window_hi = 8.0);

  const Kind& kind() const noexcept { return kind_; }
  template <class T>
  const T* as() const noexcept { return std::get_if<T>(&kind_); }

  std::size_t dim() const noexcept;
  bool contains(std::span<const double> x) const;
  /// Structural monotonicity when known (half-spaces with one-signed normal,
  /// boxes, thresholds, monotone oracles and their complements).
  std::optional<Monotonicity> monotonicity() const;
  bool is_convex() const;
  std::string describe() const;

 private:
  explicit SetDescriptor(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Exact membership.
inline bool indicator(const SetDescriptor& a, std::span<const double> x) { return a.contains(x); }

/// {t : p + t d ∈ A} as an interval union.
/// `window` bounds the scan for oracle kinds (absolute t-coordinates).
struct ScanWindow {
  double lo;
  double hi;
};
IntervalUnion line_section(const SetDescriptor& a, std::span<const double> p, std::span<const double> d,
                           std::optional<ScanWindow> window = std::nullopt);

/// Fiber A_i^x = {y : (x_1, ..., y, ..., x_n) ∈ A}.
/// `scale` (optional) sets the oracle scan window to mean ± 8 sd of that factor.
IntervalUnion fiber(const SetDescriptor& a, std::size_t i, std::span<const double> x,
                    const Measure1D* scale = nullptr);

/// Reusable buffers for all-coordinate fiber extraction.
struct FiberWorkspace {
  std::vector<IntervalUnion> fibers;
  std::vector<double> scratch;
  std::vector<double> point;
};

/// Fibers along every coordinate at x. Structured kinds share one O(n)
/// pass through the SIMD kernels; oracle kinds fall back to fiber().
void all_fibers(const SetDescriptor& a, std::span<const double> x, const ProductSpace& space,
                FiberWorkspace& ws);

/// A + [-r, r]^n. Throws CapabilityError for kinds without a closed form.
SetDescriptor enlarge(const SetDescriptor& a, double r);
/// {x : x + [-r, r]^n ⊆ A}. Throws CapabilityError for unsupported kinds.
SetDescriptor erode(const SetDescriptor& a, double r);

/// Monte Carlo estimate of the product measure of A (binomial std error).
Estimate measure_mc(const SetDescriptor& a, const ProductSpace& space, const McConfig& cfg);

struct EnlargementResult {
  double r;
  double measure_before;
  double measure_after;
  double std_error;
};
/// Measure of A and of A + [-r, r]^n on common samples.
EnlargementResult enlargement_mc(const SetDescriptor& a, double r, const ProductSpace& space,
                                 const McConfig& cfg);

struct JcalReport {
  std::size_t probes = 0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
  bool closed_form = false;  // decided exactly rather than by probing
};

/// Statistical (non-certifying) check of (A_ε)^{2ε} ⊇ A on probe points of A.
/// Probe points are drawn from the standard Gaussian and kept if inside A,
/// unless `probe_points` is given (row-major, dim(A) per point).
JcalReport jcal_spotcheck(const SetDescriptor& a, double eps, std::size_t probes, std::uint64_t seed,
                          std::span<const double> probe_points = {});

}  // namespace geoinf
