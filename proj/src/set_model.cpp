#include "geoinf/set_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "geoinf/error.hpp"
#include "geoinf/kernels.hpp"
#include "geoinf/rng.hpp"

namespace geoinf {
namespace {

constexpr std::size_t kScanGrid = 4096;
constexpr int kScanBisections = 40;
constexpr std::size_t kRotatedScanComponents = 16;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::string vec(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += num(v[i]);
  }
  return s + "]";
}

double l1_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

void require_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw DomainError("point dimension does not match set dimension");
}

// Grid scan of t -> member(t) on [lo, hi] with bisection refinement of every
// crossing. Membership at the window edges extends to +-inf.
template <class Member>
IntervalUnion scan_line(Member&& member, double lo, double hi, std::size_t max_components) {
  const double step = (hi - lo) / static_cast<double>(kScanGrid - 1);
  auto grid = [&](std::size_t k) { return lo + step * static_cast<double>(k); };

  std::vector<Interval> parts;
  bool prev = member(grid(0));
  double start = prev ? -kInf : 0.0;
  for (std::size_t k = 1; k < kScanGrid; ++k) {
    const double t = grid(k);
    const bool cur = member(t);
    if (cur == prev) continue;
    double a = grid(k - 1);
    double b = t;
    for (int it = 0; it < kScanBisections; ++it) {
      const double mid = 0.5 * (a + b);
      if (member(mid) == prev) a = mid; else b = mid;
    }
    const double edge = 0.5 * (a + b);
    if (cur) {
      start = edge;
    } else {
      parts.push_back({start, edge, std::isfinite(start), true});
    }
    prev = cur;
  }
  if (prev) parts.push_back({start, kInf, std::isfinite(start), false});
  if (parts.size() > max_components) {
    throw FiberResolutionError("fiber scan found " + std::to_string(parts.size()) +
                               " components, oracle promised at most " + std::to_string(max_components));
  }
  return IntervalUnion(std::move(parts));
}

// Index of the single nonzero entry of d, if d is axis-aligned.
std::optional<std::size_t> axis_of(std::span<const double> d) {
  std::optional<std::size_t> axis;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (d[j] == 0.0) continue;
    if (axis) return std::nullopt;
    axis = j;
  }
  return axis;
}

template <class Member>
IntervalUnion monotone_line(Member&& member) {
  double L = 1.0;
  bool left = member(-L);
  bool right = member(L);
  while (left == right && L < 1e9) {
    L *= 2.0;
    left = member(-L);
    right = member(L);
  }
  if (left == right) return left ? IntervalUnion::real_line() : IntervalUnion::empty();
  double a = -L;
  double b = L;
  for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
    const double mid = 0.5 * (a + b);
    if (member(mid) == left) a = mid; else b = mid;
  }
  const double t = 0.5 * (a + b);
  return left ? IntervalUnion::lower_ray(t) : IntervalUnion::upper_ray(t);
}

IntervalUnion linear_section(double alpha, double beta) {
  // {t : alpha t <= beta}
  if (alpha > 0.0) return IntervalUnion::lower_ray(beta / alpha);
  if (alpha < 0.0) return IntervalUnion::upper_ray(beta / alpha);
  return beta >= 0.0 ? IntervalUnion::real_line() : IntervalUnion::empty();
}

SetDescriptor shift_oracle(const shape::MonotoneOracle& o, double delta) {
  // member(x) := o.indicator(x + delta * 1)
  auto base = o.indicator;
  return SetDescriptor::monotone_oracle(
      o.n,
      [base, delta](std::span<const double> x) {
        std::vector<double> y(x.begin(), x.end());
        for (double& v : y) v += delta;
        return base(y);
      },
      o.direction);
}

}  // namespace

// ------------------------------------------------------------- factories

SetDescriptor SetDescriptor::halfspace(std::vector<double> u, double b) {
  if (u.empty()) throw DomainError("halfspace: empty normal");
  double norm = 0.0;
  for (double v : u) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("halfspace: normal must be nonzero");
  for (double& v : u) v /= norm;
  return SetDescriptor(shape::Halfspace{std::move(u), b / norm});
}

SetDescriptor SetDescriptor::box_lower(std::vector<double> a) {
  if (a.empty()) throw DomainError("box_lower: empty corner");
  return SetDescriptor(shape::BoxLower{std::move(a)});
}

SetDescriptor SetDescriptor::l2_ball(std::vector<double> center, double radius) {
  if (center.empty()) throw DomainError("l2_ball: empty center");
  if (!(radius >= 0.0)) throw DomainError("l2_ball: radius must be >= 0");
  return SetDescriptor(shape::Ball{std::move(center), radius});
}

SetDescriptor SetDescriptor::cube_dilated_ball(std::vector<double> center, double radius, double half_width) {
  if (center.empty()) throw DomainError("cube_dilated_ball: empty center");
  if (!(radius >= 0.0) || !(half_width >= 0.0)) throw DomainError("cube_dilated_ball: negative size");
  return SetDescriptor(shape::CubeDilatedBall{std::move(center), radius, half_width});
}

SetDescriptor SetDescriptor::max_threshold(std::size_t n, double level) {
  if (n == 0) throw DomainError("max_threshold: n must be >= 1");
  return SetDescriptor(shape::MaxThreshold{n, level});
}

SetDescriptor SetDescriptor::sum_threshold(std::size_t n, double level) {
  if (n == 0) throw DomainError("sum_threshold: n must be >= 1");
  return SetDescriptor(shape::SumThreshold{n, level});
}

SetDescriptor SetDescriptor::rotated(SetDescriptor base, SquareMatrix g) {
  if (g.dim() != base.dim()) throw DomainError("rotated: matrix dimension mismatch");
  return SetDescriptor(shape::Rotated{std::make_shared<const SetDescriptor>(std::move(base)), std::move(g)});
}

SetDescriptor SetDescriptor::complement(SetDescriptor base) {
  return SetDescriptor(shape::Complement{std::make_shared<const SetDescriptor>(std::move(base))});
}

SetDescriptor SetDescriptor::monotone_oracle(std::size_t n, Indicator indicator, Monotonicity direction) {
  if (n == 0) throw DomainError("monotone_oracle: n must be >= 1");
  if (!indicator) throw DomainError("monotone_oracle: empty indicator");
  // Spot-check monotonicity along 100 random fibers.
  constexpr std::uint64_t kCheckSeed = 0x6d6f6e6f746f6e65ULL;
  const Measure1D g = Measure1D::gaussian();
  std::vector<double> x(n);
  for (std::uint64_t k = 0; k < 100; ++k) {
    for (std::size_t j = 0; j < n; ++j) x[j] = g.sample_quantile(rng::uniform(kCheckSeed, k, j));
    const std::size_t i = static_cast<std::size_t>(rng::bits(kCheckSeed, k, n) % n);
    double y0 = g.sample_quantile(rng::uniform(kCheckSeed, k, n + 1));
    double y1 = g.sample_quantile(rng::uniform(kCheckSeed, k, n + 2));
    if (y0 > y1) std::swap(y0, y1);
    x[i] = y0;
    const bool low = indicator(x);
    x[i] = y1;
    const bool high = indicator(x);
    const bool ok = direction == Monotonicity::decreasing ? (low || !high) : (high || !low);
    if (!ok) throw DomainError("monotone_oracle: indicator is not monotone along a sampled fiber");
  }
  return SetDescriptor(shape::MonotoneOracle{n, std::move(indicator), direction});
}

SetDescriptor SetDescriptor::generic_oracle(std::size_t n, Indicator indicator, std::size_t max_components,
                                            double window_lo, double window_hi) {
  if (n == 0) throw DomainError("generic_oracle: n must be >= 1");
  if (!indicator) throw DomainError("generic_oracle: empty indicator");
  if (max_components == 0) throw DomainError("generic_oracle: max_components must be >= 1");
  if (!(window_lo < window_hi)) throw DomainError("generic_oracle: empty scan window");
  return SetDescriptor(shape::GenericOracle{n, std::move(indicator), max_components, window_lo, window_hi});
}

// --------------------------------------------------------------- queries

std::size_t SetDescriptor::dim() const noexcept {
  return std::visit(overloaded{
                        [](const shape::Halfspace& h) { return h.normal.size(); },
                        [](const shape::BoxLower& b) { return b.corner.size(); },
                        [](const shape::Ball& b) { return b.center.size(); },
                        [](const shape::CubeDilatedBall& b) { return b.center.size(); },
                        [](const shape::MaxThreshold& m) { return m.n; },
                        [](const shape::SumThreshold& s) { return s.n; },
                        [](const shape::Rotated& r) { return r.g.dim(); },
                        [](const shape::Complement& c) { return c.base->dim(); },
                        [](const shape::MonotoneOracle& o) { return o.n; },
                        [](const shape::GenericOracle& o) { return o.n; },
                    },
                    kind_);
}

bool SetDescriptor::contains(std::span<const double> x) const {
  require_dim(dim(), x.size());
  const auto& k = simd::active();
  return std::visit(
      overloaded{
          [&](const shape::Halfspace& h) { return k.dot(h.normal.data(), x.data(), x.size()) <= h.offset; },
          [&](const shape::BoxLower& b) { return k.count_greater(x.data(), b.corner.data(), x.size()) == 0; },
          [&](const shape::Ball& b) {
            return k.squared_distance(x.data(), b.center.data(), x.size()) <= b.radius * b.radius;
          },
          [&](const shape::CubeDilatedBall& b) {
            double acc = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
              const double d = std::max(0.0, std::fabs(x[j] - b.center[j]) - b.half_width);
              acc += d * d;
            }
            return acc <= b.radius * b.radius;
          },
          [&](const shape::MaxThreshold& m) { return k.max2(x.data(), x.size()).first > m.level; },
          [&](const shape::SumThreshold& s) { return k.sum(x.data(), x.size()) >= s.level; },
          [&](const shape::Rotated& r) {
            std::vector<double> y(x.size());
            r.g.apply_transpose(x, y);
            return r.base->contains(y);
          },
          [&](const shape::Complement& c) { return !c.base->contains(x); },
          [&](const shape::MonotoneOracle& o) { return o.indicator(x); },
          [&](const shape::GenericOracle& o) { return o.indicator(x); },
      },
      kind_);
}

std::optional<Monotonicity> SetDescriptor::monotonicity() const {
  return std::visit(
      overloaded{
          [](const shape::Halfspace& h) -> std::optional<Monotonicity> {
            const bool nonneg = std::all_of(h.normal.begin(), h.normal.end(), [](double v) { return v >= 0; });
            const bool nonpos = std::all_of(h.normal.begin(), h.normal.end(), [](double v) { return v <= 0; });
            if (nonneg) return Monotonicity::decreasing;
            if (nonpos) return Monotonicity::increasing;
            return std::nullopt;
          },
          [](const shape::BoxLower&) -> std::optional<Monotonicity> { return Monotonicity::decreasing; },
          [](const shape::MaxThreshold&) -> std::optional<Monotonicity> { return Monotonicity::increasing; },
          [](const shape::SumThreshold&) -> std::optional<Monotonicity> { return Monotonicity::increasing; },
          [](const shape::Complement& c) -> std::optional<Monotonicity> {
            auto m = c.base->monotonicity();
            if (!m) return std::nullopt;
            return *m == Monotonicity::increasing ? Monotonicity::decreasing : Monotonicity::increasing;
          },
          [](const shape::MonotoneOracle& o) -> std::optional<Monotonicity> { return o.direction; },
          [](const auto&) -> std::optional<Monotonicity> { return std::nullopt; },
      },
      kind_);
}

bool SetDescriptor::is_convex() const {
  return std::visit(overloaded{
                        [](const shape::Halfspace&) { return true; },
                        [](const shape::BoxLower&) { return true; },
                        [](const shape::Ball&) { return true; },
                        [](const shape::CubeDilatedBall&) { return true; },
                        [](const shape::SumThreshold&) { return true; },
                        [](const shape::Rotated& r) { return r.base->is_convex(); },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

std::string SetDescriptor::describe() const {
  return std::visit(
      overloaded{
          [](const shape::Halfspace& h) { return "halfspace(u=" + vec(h.normal) + ",b=" + num(h.offset) + ")"; },
          [](const shape::BoxLower& b) { return "box_lower(a=" + vec(b.corner) + ")"; },
          [](const shape::Ball& b) { return "l2_ball(c=" + vec(b.center) + ",R=" + num(b.radius) + ")"; },
          [](const shape::CubeDilatedBall& b) {
            return "cube_dilated_ball(c=" + vec(b.center) + ",R=" + num(b.radius) + ",r=" + num(b.half_width) + ")";
          },
          [](const shape::MaxThreshold& m) {
            return "max_threshold(n=" + std::to_string(m.n) + ",K=" + num(m.level) + ")";
          },
          [](const shape::SumThreshold& s) {
            return "sum_threshold(n=" + std::to_string(s.n) + ",K=" + num(s.level) + ")";
          },
          [](const shape::Rotated& r) { return "rotated(" + r.base->describe() + ")"; },
          [](const shape::Complement& c) { return "complement(" + c.base->describe() + ")"; },
          [](const shape::MonotoneOracle& o) {
            return std::string("monotone_oracle(n=") + std::to_string(o.n) +
                   (o.direction == Monotonicity::increasing ? ",increasing)" : ",decreasing)");
          },
          [](const shape::GenericOracle& o) {
            return "generic_oracle(n=" + std::to_string(o.n) + ",k=" + std::to_string(o.max_components) + ")";
          },
      },
      kind_);
}

// ------------------------------------------------------------ line sections

IntervalUnion line_section(const SetDescriptor& a, std::span<const double> p, std::span<const double> d,
                           std::optional<ScanWindow> window) {
  const std::size_t n = a.dim();
  require_dim(n, p.size());
  require_dim(n, d.size());
  const auto& k = simd::active();

  auto oracle_member = [&](const Indicator& ind) {
    return [&, buf = std::vector<double>(n)](double t) mutable {
      for (std::size_t j = 0; j < n; ++j) buf[j] = p[j] + t * d[j];
      return ind(buf);
    };
  };

  return std::visit(
      overloaded{
          [&](const shape::Halfspace& h) {
            return linear_section(k.dot(h.normal.data(), d.data(), n), h.offset - k.dot(h.normal.data(), p.data(), n));
          },
          [&](const shape::BoxLower& b) {
            double lo = -kInf;
            double hi = kInf;
            for (std::size_t j = 0; j < n; ++j) {
              const double slack = b.corner[j] - p[j];
              if (d[j] > 0.0) hi = std::min(hi, slack / d[j]);
              else if (d[j] < 0.0) lo = std::max(lo, slack / d[j]);
              else if (slack < 0.0) return IntervalUnion::empty();
            }
            return IntervalUnion({{lo, hi, std::isfinite(lo), std::isfinite(hi)}});
          },
          [&](const shape::Ball& b) {
            double qa = 0.0, qb = 0.0, qc = -b.radius * b.radius;
            for (std::size_t j = 0; j < n; ++j) {
              const double off = p[j] - b.center[j];
              qa += d[j] * d[j];
              qb += d[j] * off;
              qc += off * off;
            }
            if (qa == 0.0) return qc <= 0.0 ? IntervalUnion::real_line() : IntervalUnion::empty();
            const double disc = qb * qb - qa * qc;
            if (disc < 0.0) return IntervalUnion::empty();
            const double root = std::sqrt(disc);
            return IntervalUnion::segment((-qb - root) / qa, (-qb + root) / qa);
          },
          [&](const shape::CubeDilatedBall& b) {
            const auto axis = axis_of(d);
            if (!axis) throw CapabilityError("cube_dilated_ball: only axis-aligned sections are supported");
            const std::size_t i = *axis;
            double rest = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              if (j == i) continue;
              const double e = std::max(0.0, std::fabs(p[j] - b.center[j]) - b.half_width);
              rest += e * e;
            }
            const double r2 = b.radius * b.radius;
            if (rest > r2) return IntervalUnion::empty();
            const double reach = b.half_width + std::sqrt(r2 - rest);
            const double t0 = (b.center[i] - reach - p[i]) / d[i];
            const double t1 = (b.center[i] + reach - p[i]) / d[i];
            return IntervalUnion::segment(std::min(t0, t1), std::max(t0, t1));
          },
          [&](const shape::MaxThreshold& m) {
            std::vector<Interval> parts;
            for (std::size_t j = 0; j < n; ++j) {
              const double gap = m.level - p[j];
              if (d[j] > 0.0) parts.push_back({gap / d[j], kInf, false, false});
              else if (d[j] < 0.0) parts.push_back({-kInf, gap / d[j], false, false});
              else if (p[j] > m.level) return IntervalUnion::real_line();
            }
            return IntervalUnion(std::move(parts));
          },
          [&](const shape::SumThreshold& s) {
            // sum p + t sum d >= K  <=>  -(sum d) t <= sum p - K
            return linear_section(-k.sum(d.data(), n), k.sum(p.data(), n) - s.level);
          },
          [&](const shape::Rotated& r) {
            std::vector<double> pp(n), dd(n);
            r.g.apply_transpose(p, pp);
            r.g.apply_transpose(d, dd);
            return line_section(*r.base, pp, dd, window);
          },
          [&](const shape::Complement& c) { return line_section(*c.base, p, d, window).complement(); },
          [&](const shape::MonotoneOracle& o) {
            if (axis_of(d)) return monotone_line(oracle_member(o.indicator));
            const ScanWindow w = window.value_or(ScanWindow{-8.0, 8.0});
            return scan_line(oracle_member(o.indicator), w.lo, w.hi, kRotatedScanComponents);
          },
          [&](const shape::GenericOracle& o) {
            const ScanWindow w = window.value_or(ScanWindow{o.window_lo, o.window_hi});
            return scan_line(oracle_member(o.indicator), w.lo, w.hi, o.max_components);
          },
      },
      a.kind());
}

namespace {

std::optional<ScanWindow> window_for(const SetDescriptor& a, const Measure1D* scale) {
  if (!scale) return std::nullopt;
  double lo = -8.0, hi = 8.0;
  if (const auto* g = a.as<shape::GenericOracle>()) {
    lo = g->window_lo;
    hi = g->window_hi;
  }
  const double sd = scale->stddev();
  return ScanWindow{scale->mean() + lo * sd, scale->mean() + hi * sd};
}

}  // namespace

IntervalUnion fiber(const SetDescriptor& a, std::size_t i, std::span<const double> x, const Measure1D* scale) {
  const std::size_t n = a.dim();
  require_dim(n, x.size());
  if (i >= n) throw DomainError("fiber: coordinate out of range");
  std::vector<double> p(x.begin(), x.end());
  p[i] = 0.0;
  std::vector<double> d(n, 0.0);
  d[i] = 1.0;
  return line_section(a, p, d, window_for(a, scale));
}

void all_fibers(const SetDescriptor& a, std::span<const double> x, const ProductSpace& space, FiberWorkspace& ws) {
  const std::size_t n = a.dim();
  require_dim(n, x.size());
  ws.fibers.resize(n);
  const auto& k = simd::active();

  if (const auto* h = a.as<shape::Halfspace>()) {
    const double residual = h->offset - k.dot(h->normal.data(), x.data(), n);
    ws.scratch.resize(n);
    k.affine_thresholds(x.data(), h->normal.data(), residual, ws.scratch.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = h->normal[i];
      if (u > 0.0) ws.fibers[i].assign_ray_lower(ws.scratch[i]);
      else if (u < 0.0) ws.fibers[i].assign_ray_upper(ws.scratch[i]);
      else if (residual >= 0.0) ws.fibers[i].assign_real_line();
      else ws.fibers[i].clear();
    }
    return;
  }
  if (const auto* b = a.as<shape::BoxLower>()) {
    const std::size_t bad = k.count_greater(x.data(), b->corner.data(), n);
    for (auto& f : ws.fibers) f.clear();
    if (bad == 0) {
      for (std::size_t i = 0; i < n; ++i) ws.fibers[i].assign_ray_lower(b->corner[i]);
    } else if (bad == 1) {
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > b->corner[i]) {
          ws.fibers[i].assign_ray_lower(b->corner[i]);
          break;
        }
      }
    }
    return;
  }
  if (const auto* b = a.as<shape::Ball>()) {
    const double total = k.squared_distance(x.data(), b->center.data(), n);
    const double r2 = b->radius * b->radius;
    for (std::size_t i = 0; i < n; ++i) {
      const double off = x[i] - b->center[i];
      const double rest = total - off * off;
      if (rest <= r2) {
        const double s = std::sqrt(std::max(0.0, r2 - rest));
        ws.fibers[i].assign_segment(b->center[i] - s, b->center[i] + s);
      } else {
        ws.fibers[i].clear();
      }
    }
    return;
  }
  if (const auto* m = a.as<shape::MaxThreshold>()) {
    const simd::Max2 top = k.max2(x.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const double others = i == top.arg_first ? top.second : top.first;
      if (others > m->level) ws.fibers[i].assign_real_line();
      else ws.fibers[i].assign_ray_upper(m->level, false);
    }
    return;
  }
  if (const auto* s = a.as<shape::SumThreshold>()) {
    const double total = k.sum(x.data(), n);
    for (std::size_t i = 0; i < n; ++i) ws.fibers[i].assign_ray_upper(s->level - (total - x[i]));
    return;
  }
  if (const auto* c = a.as<shape::Complement>()) {
    all_fibers(*c->base, x, space, ws);
    for (auto& f : ws.fibers) f = f.complement();
    return;
  }
  for (std::size_t i = 0; i < n; ++i) ws.fibers[i] = fiber(a, i, x, &space.factor(i));
}

// -------------------------------------------------- enlargement / erosion

namespace {

SetDescriptor cube_offset(const SetDescriptor& a, double r, bool grow);

SetDescriptor rotated_offset(const shape::Rotated& rot, double r, bool grow) {
  // Half-spaces and balls absorb the rotation exactly.
  if (const auto* h = rot.base->as<shape::Halfspace>()) {
    return cube_offset(SetDescriptor::halfspace(rot.g.apply(h->normal), h->offset), r, grow);
  }
  if (const auto* b = rot.base->as<shape::Ball>()) {
    return cube_offset(SetDescriptor::l2_ball(rot.g.apply(b->center), b->radius), r, grow);
  }
  throw CapabilityError("enlarge/erode: rotated " + rot.base->describe() + " has no closed form");
}

SetDescriptor cube_offset(const SetDescriptor& a, double r, bool grow) {
  const double s = grow ? r : -r;
  return std::visit(
      overloaded{
          [&](const shape::Halfspace& h) { return SetDescriptor::halfspace(h.normal, h.offset + s * l1_norm(h.normal)); },
          [&](const shape::BoxLower& b) {
            std::vector<double> c = b.corner;
            for (double& v : c) v += s;
            return SetDescriptor::box_lower(std::move(c));
          },
          [&](const shape::Ball& b) {
            if (!grow) throw CapabilityError("erode: L-infinity erosion of a ball has no closed form");
            return SetDescriptor::cube_dilated_ball(b.center, b.radius, r);
          },
          [&](const shape::CubeDilatedBall& b) {
            if (!grow && r > b.half_width) throw CapabilityError("erode: radius exceeds the cube part");
            return SetDescriptor::cube_dilated_ball(b.center, b.radius, b.half_width + s);
          },
          [&](const shape::MaxThreshold& m) { return SetDescriptor::max_threshold(m.n, m.level - s); },
          [&](const shape::SumThreshold& t) {
            return SetDescriptor::sum_threshold(t.n, t.level - s * static_cast<double>(t.n));
          },
          [&](const shape::Rotated& rot) { return rotated_offset(rot, r, grow); },
          [&](const shape::Complement& c) { return SetDescriptor::complement(cube_offset(*c.base, r, !grow)); },
          [&](const shape::MonotoneOracle& o) {
            // Decreasing A: A + C = {x : x - r1 ∈ A}, A ⊖ C = {x : x + r1 ∈ A}.
            const double sign = o.direction == Monotonicity::decreasing ? -1.0 : 1.0;
            return shift_oracle(o, sign * s);
          },
          [&](const shape::GenericOracle&) -> SetDescriptor {
            throw CapabilityError("enlarge/erode: generic oracle has no closed form");
          },
      },
      a.kind());
}

}  // namespace

SetDescriptor enlarge(const SetDescriptor& a, double r) {
  if (!(r > 0.0)) throw DomainError("enlarge: r must be positive");
  return cube_offset(a, r, true);
}

SetDescriptor erode(const SetDescriptor& a, double r) {
  if (!(r > 0.0)) throw DomainError("erode: r must be positive");
  return cube_offset(a, r, false);
}

// ------------------------------------------------------------ measurement

Estimate measure_mc(const SetDescriptor& a, const ProductSpace& space, const McConfig& cfg) {
  require_dim(a.dim(), space.dim());
  if (cfg.samples < 100) throw DomainError("measure_mc: need at least 100 samples");
  const Moments m = monte_carlo(space, cfg, 1, [&a] {
    return [&a](std::span<const double> x, std::span<double> out) { out[0] = a.contains(x) ? 1.0 : 0.0; };
  });
  return m.estimate(0);
}

EnlargementResult enlargement_mc(const SetDescriptor& a, double r, const ProductSpace& space, const McConfig& cfg) {
  require_dim(a.dim(), space.dim());
  const SetDescriptor big = enlarge(a, r);
  const Moments m = monte_carlo(space, cfg, 3, [&] {
    return [&](std::span<const double> x, std::span<double> out) {
      const double in_a = a.contains(x) ? 1.0 : 0.0;
      const double in_big = big.contains(x) ? 1.0 : 0.0;
      out[0] = in_a;
      out[1] = in_big;
      out[2] = in_big - in_a;
    };
  });
  return {r, m.mean(0), m.mean(1), m.std_error(2)};
}

JcalReport jcal_spotcheck(const SetDescriptor& a, double eps, std::size_t probes, std::uint64_t seed,
                          std::span<const double> probe_points) {
  if (!(eps > 0.0)) throw DomainError("jcal_spotcheck: eps must be positive");
  const std::size_t n = a.dim();
  if (!probe_points.empty() && probe_points.size() % n != 0) {
    throw DomainError("jcal_spotcheck: probe point buffer is not a multiple of dim");
  }

  // Probe points inside A.
  std::vector<double> pts;
  if (!probe_points.empty()) {
    for (std::size_t off = 0; off < probe_points.size(); off += n) {
      auto x = probe_points.subspan(off, n);
      if (a.contains(x)) pts.insert(pts.end(), x.begin(), x.end());
    }
  } else {
    const ProductSpace gauss = ProductSpace::homogeneous(Measure1D::gaussian(), n);
    std::vector<double> x(n);
    for (std::uint64_t k = 0; pts.size() / n < probes && k < 1000 * static_cast<std::uint64_t>(probes); ++k) {
      gauss.sample_point(seed, k, x);
      if (a.contains(x)) pts.insert(pts.end(), x.begin(), x.end());
    }
  }

  JcalReport report;
  report.probes = pts.size() / n;
  std::vector<double> y(n), z(n);

  std::optional<std::function<bool(std::span<const double>)>> covered_exact;
  if (const auto* h = a.as<shape::Halfspace>()) {
    // A_eps = {<u,x> <= b - eps}, (A_eps)^{2 eps} = {<u,x> < b + eps}.
    covered_exact = [h, eps](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) s += h->normal[j] * x[j];
      return s < h->offset + eps;
    };
  } else if (const auto* b = a.as<shape::Ball>()) {
    // A_eps = closed ball of radius R - eps (empty if R < eps); dilation adds 2 eps.
    covered_exact = [b, eps](std::span<const double> x) {
      if (b->radius < eps) return false;
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - b->center[j]) * (x[j] - b->center[j]);
      return std::sqrt(s) < b->radius + eps;
    };
  }

  if (covered_exact) {
    report.closed_form = true;
    for (std::size_t p = 0; p < report.probes; ++p) {
      if (!(*covered_exact)(std::span<const double>(pts.data() + p * n, n))) ++report.violations;
    }
  } else {
    // Probe directions: ± axes plus random unit vectors.
    std::vector<std::vector<double>> dirs;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      dirs.push_back(e);
      e[j] = -1.0;
      dirs.push_back(e);
    }
    const Measure1D g = Measure1D::gaussian();
    const std::uint64_t dir_seed = rng::derive(seed, 0xd1);
    for (std::uint64_t k = 0; k < 32; ++k) {
      std::vector<double> v(n);
      double norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        v[j] = g.sample_quantile(rng::uniform(dir_seed, k, j));
        norm += v[j] * v[j];
      }
      norm = std::sqrt(norm);
      for (double& c : v) c /= norm;
      dirs.push_back(std::move(v));
    }
    auto in_eroded = [&](std::span<const double> c) {
      if (!a.contains(c)) return false;
      for (const auto& v : dirs) {
        for (std::size_t j = 0; j < n; ++j) z[j] = c[j] + eps * v[j];
        if (!a.contains(z)) return false;
      }
      return true;
    };
    const double radii[] = {0.0, 0.5 * eps, eps, 1.5 * eps, 1.95 * eps};
    for (std::size_t p = 0; p < report.probes; ++p) {
      std::span<const double> x(pts.data() + p * n, n);
      bool covered = false;
      for (double s : radii) {
        for (const auto& v : dirs) {
          for (std::size_t j = 0; j < n; ++j) y[j] = x[j] + s * v[j];
          if (in_eroded(y)) {
            covered = true;
            break;
          }
          if (s == 0.0) break;
        }
        if (covered) break;
      }
      if (!covered) ++report.violations;
    }
  }
  report.violation_fraction =
      report.probes ? static_cast<double>(report.violations) / static_cast<double>(report.probes) : 0.0;
  return report;
}

}  // namespace geoinf
