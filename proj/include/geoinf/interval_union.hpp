#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "geoinf/measure.hpp"

namespace geoinf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval with endpoints in R ∪ {±inf}. lo == hi encodes a single point.
struct Interval {
  double lo;
  double hi;
  bool lo_closed = true;
  bool hi_closed = true;

  bool degenerate() const noexcept { return lo == hi; }
  bool contains(double y) const noexcept {
    return (lo < y || (lo_closed && lo == y)) && (y < hi || (hi_closed && hi == y));
  }
};

/// Finite union of disjoint, sorted intervals separated by gaps of positive
/// length. Construction normalizes (sorts, merges overlapping or touching
/// pieces, drops empty ones).
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> pieces);

  static IntervalUnion empty() { return {}; }
  static IntervalUnion real_line() { return IntervalUnion({{-kInf, kInf, false, false}}); }
  static IntervalUnion lower_ray(double t, bool closed = true) {
    return IntervalUnion({{-kInf, t, false, closed}});
  }
  static IntervalUnion upper_ray(double t, bool closed = true) {
    return IntervalUnion({{t, kInf, closed, false}});
  }
  static IntervalUnion segment(double a, double b) { return IntervalUnion({{a, b, true, true}}); }

  const std::vector<Interval>& components() const noexcept { return parts_; }
  std::size_t size() const noexcept { return parts_.size(); }
  bool is_empty() const noexcept { return parts_.empty(); }
  bool is_real_line() const noexcept {
    return parts_.size() == 1 && parts_[0].lo == -kInf && parts_[0].hi == kInf;
  }
  bool contains(double y) const noexcept;

  /// In-place reset used by hot loops to keep capacity.
  void clear() noexcept { parts_.clear(); }
  /// Appends a piece known to lie strictly right of the current last one.
  void push_sorted(const Interval& piece) { parts_.push_back(piece); }
  void assign_ray_lower(double t) { parts_.assign(1, {-kInf, t, false, true}); }
  void assign_ray_upper(double t, bool closed = true) { parts_.assign(1, {t, kInf, closed, false}); }
  void assign_segment(double a, double b) { parts_.assign(1, {a, b, true, true}); }
  void assign_real_line() { parts_.assign(1, {-kInf, kInf, false, false}); }

  IntervalUnion complement() const;
  IntervalUnion united(const IntervalUnion& other) const;
  IntervalUnion intersected(const IntervalUnion& other) const;
  /// Exact one-dimensional enlargement S + [-r, r].
  IntervalUnion dilated(double r) const;

  /// Sum of CDF increments over components.
  double measure(const Measure1D& m) const;

  std::string describe() const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  std::vector<Interval> parts_;
};

inline bool operator==(const Interval& a, const Interval& b) noexcept {
  return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed && a.hi_closed == b.hi_closed;
}

/// Lower Minkowski content of a finite interval union under a measure with
/// continuous density: the density summed over every finite boundary side.
/// A segment [a, b] gives λ(a) + λ(b), a ray its finite endpoint, a single
/// point 2λ(a); R and ∅ give 0.
double minkowski_content(const IntervalUnion& s, const Measure1D& m);

}  // namespace geoinf
