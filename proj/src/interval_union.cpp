#include "geoinf/interval_union.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace geoinf {
namespace {

bool is_empty_piece(const Interval& p) {
  if (std::isnan(p.lo) || std::isnan(p.hi)) return true;
  if (p.lo > p.hi) return true;
  if (p.lo == p.hi) return !(p.lo_closed && p.hi_closed) || std::isinf(p.lo);
  return false;
}

std::string num(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

}  // namespace

IntervalUnion::IntervalUnion(std::vector<Interval> pieces) {
  pieces.erase(std::remove_if(pieces.begin(), pieces.end(), is_empty_piece), pieces.end());
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  for (const Interval& p : pieces) {
    if (!parts_.empty()) {
      Interval& last = parts_.back();
      // Merge on overlap or on a shared endpoint (no gap of positive length).
      if (p.lo <= last.hi) {
        if (p.hi > last.hi) {
          last.hi = p.hi;
          last.hi_closed = p.hi_closed;
        } else if (p.hi == last.hi) {
          last.hi_closed = last.hi_closed || p.hi_closed;
        }
        continue;
      }
    }
    parts_.push_back(p);
  }
}

bool IntervalUnion::contains(double y) const noexcept {
  return std::any_of(parts_.begin(), parts_.end(), [y](const Interval& p) { return p.contains(y); });
}

IntervalUnion IntervalUnion::complement() const {
  std::vector<Interval> out;
  double cursor = -kInf;
  bool cursor_closed = false;  // whether `cursor` itself belongs to the complement
  for (const Interval& p : parts_) {
    if (p.lo > cursor) {
      out.push_back({cursor, p.lo, cursor_closed, !p.lo_closed});
    }
    cursor = p.hi;
    cursor_closed = !p.hi_closed;
  }
  if (cursor < kInf) out.push_back({cursor, kInf, cursor_closed, false});
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::united(const IntervalUnion& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalUnion(std::move(all));
}

IntervalUnion IntervalUnion::intersected(const IntervalUnion& other) const {
  std::vector<Interval> out;
  for (const Interval& a : parts_) {
    for (const Interval& b : other.parts_) {
      Interval c;
      if (a.lo > b.lo) { c.lo = a.lo; c.lo_closed = a.lo_closed; }
      else if (b.lo > a.lo) { c.lo = b.lo; c.lo_closed = b.lo_closed; }
      else { c.lo = a.lo; c.lo_closed = a.lo_closed && b.lo_closed; }
      if (a.hi < b.hi) { c.hi = a.hi; c.hi_closed = a.hi_closed; }
      else if (b.hi < a.hi) { c.hi = b.hi; c.hi_closed = b.hi_closed; }
      else { c.hi = a.hi; c.hi_closed = a.hi_closed && b.hi_closed; }
      out.push_back(c);
    }
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::dilated(double r) const {
  std::vector<Interval> out;
  out.reserve(parts_.size());
  for (const Interval& p : parts_) out.push_back({p.lo - r, p.hi + r, true, true});
  for (Interval& p : out) {
    if (std::isinf(p.lo)) p.lo_closed = false;
    if (std::isinf(p.hi)) p.hi_closed = false;
  }
  return IntervalUnion(std::move(out));
}

double IntervalUnion::measure(const Measure1D& m) const {
  double total = 0.0;
  for (const Interval& p : parts_) {
    if (p.degenerate()) continue;
    // Use whichever tail keeps precision.
    if (p.hi == kInf) total += m.sf(p.lo);
    else if (p.lo == -kInf) total += m.cdf(p.hi);
    else if (p.lo >= m.mean()) total += m.sf(p.lo) - m.sf(p.hi);
    else total += m.cdf(p.hi) - m.cdf(p.lo);
  }
  return total;
}

std::string IntervalUnion::describe() const {
  if (parts_.empty()) return "{}";
  std::string s;
  for (const Interval& p : parts_) {
    if (!s.empty()) s += " U ";
    s += p.lo_closed ? '[' : '(';
    s += num(p.lo) + "," + num(p.hi);
    s += p.hi_closed ? ']' : ')';
  }
  return s;
}

double minkowski_content(const IntervalUnion& s, const Measure1D& m) {
  double total = 0.0;
  for (const Interval& p : s.components()) {
    if (std::isfinite(p.lo)) total += m.density(p.lo);
    if (std::isfinite(p.hi)) total += m.density(p.hi);
  }
  return total;
}

}  // namespace geoinf
