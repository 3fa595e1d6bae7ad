#include "geoinf/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "geoinf/error.hpp"
#include "geoinf/rng.hpp"

namespace geoinf {
namespace {

constexpr double kBig = std::numeric_limits<double>::max();
constexpr std::size_t kJuntaInner = 1000;

std::string short_num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

double kkl_scale(std::size_t n, const Regime& regime) {
  return std::pow(std::log(static_cast<double>(n)), regime.exponent());
}

}  // namespace

Regime Regime::boltzmann(double rho) {
  if (!(rho >= 1.0)) throw DomainError("Regime: rho must be >= 1");
  return {rho, false};
}

Measure1D Regime::measure() const { return gaussian ? Measure1D::gaussian() : Measure1D::boltzmann(rho); }

std::string Regime::context() const { return gaussian ? "gaussian" : "rho" + short_num(rho); }

BoundReport make_report(std::string name, double lhs, double rhs_at_c1, double baseline, BoundDirection dir,
                        BoundContext ctx) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs_at_c1) || !std::isfinite(baseline)) {
    throw DomainError(name + ": non-finite report field");
  }
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs_at_c1 = rhs_at_c1;
  r.baseline_constant = baseline;
  r.direction = dir;
  r.context = std::move(ctx);
  if (rhs_at_c1 > 0.0) {
    r.implied_constant = lhs / rhs_at_c1;
  } else if (dir == BoundDirection::lower) {
    r.implied_constant = kBig;
  } else {
    r.implied_constant = lhs > 0.0 ? kBig : 0.0;
  }
  r.pass = dir == BoundDirection::lower ? r.implied_constant >= baseline : r.implied_constant <= baseline;
  return r;
}

// ---------------------------------------------------------------- boundary

BoundaryEstimate boundary_estimate(const SetDescriptor& a, const ProductSpace& space,
                                   const std::vector<double>& r_schedule, const McConfig& cfg) {
  const std::size_t n = a.dim();
  if (n != space.dim()) throw DomainError("boundary_estimate: dimension mismatch");
  if (r_schedule.empty()) throw DomainError("boundary_estimate: empty r schedule");
  for (std::size_t k = 0; k < r_schedule.size(); ++k) {
    if (!(r_schedule[k] > 0.0)) throw DomainError("boundary_estimate: radii must be positive");
    if (k && !(r_schedule[k] < r_schedule[k - 1])) throw DomainError("boundary_estimate: radii must decrease");
  }
  const std::size_t m = r_schedule.size();
  std::vector<SetDescriptor> grown;
  grown.reserve(m);
  for (double r : r_schedule) grown.push_back(enlarge(a, r));

  // Extrapolation weights from the two smallest radii.
  double w_small = 1.0, w_next = 0.0;
  if (m >= 2) {
    const double rs = r_schedule[m - 1];
    const double rn = r_schedule[m - 2];
    w_small = rn / (rn - rs);
    w_next = -rs / (rn - rs);
  }

  // Layout: [D_0 .. D_{m-1}, limit, 1_A, influence sum, limit - sum]
  const Moments mom = monte_carlo(space, cfg, m + 4, [&] {
    return [&, ws = FiberWorkspace{}](std::span<const double> x, std::span<double> out) mutable {
      const double in_a = a.contains(x) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        out[k] = ((grown[k].contains(x) ? 1.0 : 0.0) - in_a) / r_schedule[k];
      }
      const double limit = m >= 2 ? w_small * out[m - 1] + w_next * out[m - 2] : out[0];
      all_fibers(a, x, space, ws);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += minkowski_content(ws.fibers[i], space.factor(i));
      out[m] = limit;
      out[m + 1] = in_a;
      out[m + 2] = sum;
      out[m + 3] = limit - sum;
    };
  });

  BoundaryEstimate be;
  be.r = r_schedule;
  for (std::size_t k = 0; k < m; ++k) be.per_r.push_back(mom.estimate(k));
  be.limit = mom.estimate(m);
  be.measure = mom.estimate(m + 1);
  be.influence_sum = mom.estimate(m + 2);
  be.difference_std_error = mom.std_error(m + 3);
  return be;
}

// --------------------------------------------------------- influence bounds

BoundReport check_kkl(std::span<const double> influences, double t, const Regime& regime,
                      const Baselines& baselines, std::uint64_t seed) {
  const std::size_t n = influences.size();
  if (n < 2) throw DomainError("check_kkl: n must be >= 2");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("check_kkl: t outside [0, 1]");
  const double lhs = *std::max_element(influences.begin(), influences.end());
  const double rhs = t * (1.0 - t) * kkl_scale(n, regime) / static_cast<double>(n);
  return make_report("kkl", lhs, rhs, baselines.lookup("kkl", regime.context()), BoundDirection::lower,
                     {n, regime.context(), t, seed});
}

BoundReport check_talagrand_sum(std::span<const double> influences, double t, const Regime& regime,
                                const Baselines& baselines, std::uint64_t seed) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("check_talagrand_sum: t outside [0, 1]");
  double lhs = 0.0;
  bool ok = true;
  for (double v : influences) {
    if (!(v > 0.0)) continue;
    double logterm = 1.0;
    if (v < 1.0) logterm = std::pow(-std::log(v), regime.exponent());
    else ok = false;
    lhs += v / logterm;
  }
  BoundReport r = make_report("talagrand_sum", lhs, t * (1.0 - t), baselines.lookup("talagrand", regime.context()),
                              BoundDirection::lower, {influences.size(), regime.context(), t, seed});
  r.precondition_ok = ok;
  if (!ok) r.note = "influence >= 1: log factor clamped at 1";
  return r;
}

BoundReport check_lowmax_sum(std::span<const double> influences, double t, double alpha, const Regime& regime,
                             const Baselines& baselines, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("check_lowmax_sum: alpha outside (0, 1]");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("check_lowmax_sum: t outside [0, 1]");
  const double lhs = std::accumulate(influences.begin(), influences.end(), 0.0);
  const double mx = influences.empty() ? 0.0 : *std::max_element(influences.begin(), influences.end());
  const double rhs = t * (1.0 - t) * std::pow(-std::log(alpha), regime.exponent());
  BoundReport r = make_report("lowmax_sum", lhs, rhs, baselines.lookup("lowmax", regime.context()),
                              BoundDirection::lower, {influences.size(), regime.context(), t, seed});
  r.precondition_ok = mx <= alpha;
  if (!r.precondition_ok) r.note = "max influence exceeds alpha";
  return r;
}

// ------------------------------------------------------------------ junta

JuntaResult junta_approx(const SetDescriptor& a, const ProductSpace& space, double eps, const McConfig& cfg,
                         const Regime& regime, const Baselines& baselines) {
  const std::size_t n = a.dim();
  if (n != space.dim()) throw DomainError("junta_approx: dimension mismatch");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("junta_approx: eps outside (0, 1)");
  const auto direction = a.monotonicity();
  if (!direction) throw DomainError("junta_approx: set must be monotone");

  const InfluenceProfile prof = influence_profile(a, space, cfg);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return prof.coords[l].value > prof.coords[r].value; });

  auto inner = std::make_shared<const PointBatch>(sample(space, rng::derive(cfg.seed, 0x6a756e7461ULL), kJuntaInner));

  auto make_b = [&](std::size_t k) {
    std::vector<std::size_t> keep(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    Indicator ind = [a, keep, inner, n](std::span<const double> x) {
      std::vector<double> y(n);
      std::size_t hits = 0;
      for (std::size_t j = 0; j < inner->size(); ++j) {
        auto z = inner->point(j);
        std::copy(z.begin(), z.end(), y.begin());
        for (std::size_t c : keep) y[c] = x[c];
        if (a.contains(y)) ++hits;
      }
      return 2 * hits > inner->size();
    };
    return SetDescriptor::monotone_oracle(n, std::move(ind), *direction);
  };

  auto symmdiff = [&](const SetDescriptor& b) {
    const Moments m = monte_carlo(space, cfg, 1, [&] {
      return [&](std::span<const double> x, std::span<double> out) {
        out[0] = a.contains(x) != b.contains(x) ? 1.0 : 0.0;
      };
    });
    return m.estimate(0);
  };

  struct Trial {
    std::size_t k;
    SetPtr b;
    Estimate d;
  };
  auto attempt = [&](std::size_t k) {
    auto b = std::make_shared<const SetDescriptor>(make_b(k));
    return Trial{k, b, symmdiff(*b)};
  };

  Trial best = attempt(0);
  bool ok = best.d.value <= eps;
  if (!ok) {
    // Doubling, then bisection between the last failure and first success.
    std::size_t lo = 0;
    std::size_t hi = 1;
    for (;;) {
      Trial t = attempt(hi);
      if (t.d.value <= eps) {
        best = t;
        ok = true;
        break;
      }
      best = t;
      lo = hi;
      if (hi == n) break;
      hi = std::min(n, 2 * hi);
    }
    if (ok) {
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        Trial t = attempt(mid);
        if (t.d.value <= eps) {
          hi = mid;
          best = t;
        } else {
          lo = mid;
        }
      }
    }
  }

  JuntaResult res;
  res.k = best.k;
  res.coordinates.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best.k));
  res.approximant = best.b;
  res.symmdiff = best.d;
  res.success = ok;
  for (const auto& c : prof.coords) {
    if (c.value > 0.0 && c.value < 1.0) res.s += c.value * std::pow(-std::log(c.value), 1.0 / regime.rho);
  }
  const double lhs = best.k > 1 ? std::log(static_cast<double>(best.k)) : 0.0;
  res.report = make_report("junta", lhs, res.s / eps, baselines.lookup("junta_c2", regime.context()),
                           BoundDirection::upper, {n, regime.context(), prof.sum.value, cfg.seed});
  res.report.precondition_ok = ok;
  if (!ok) res.report.note = "no junta within eps found up to k = n";
  return res;
}

// ------------------------------------------------------------ isoperimetry

BoundReport check_1d_iso(const IntervalUnion& s, const Measure1D& m, double r) {
  if (!(r > 0.0)) throw DomainError("check_1d_iso: r must be positive");
  if (!m.symmetric()) throw DomainError("check_1d_iso: measure must be symmetric log-concave");
  const double t = s.measure(m);
  const double tc = s.complement().measure(m);
  const IntervalUnion grown = s.dilated(r);
  double lhs, rhs;
  if (t <= 0.5) {
    lhs = grown.measure(m);
    rhs = t > 0.0 ? m.cdf(m.quantile(t) + r) : 0.0;
  } else {
    // Work with complements so tails near 1 keep their digits.
    lhs = 1.0 - grown.complement().measure(m);
    rhs = tc > 0.0 ? 1.0 - m.sf(m.upper_quantile(tc) + r) : 1.0;
  }
  BoundReport rep;
  rep.name = "iso_1d";
  rep.lhs = lhs;
  rep.rhs_at_c1 = rhs;
  rep.implied_constant = rhs > 0.0 ? lhs / rhs : kBig;
  rep.baseline_constant = 1.0;
  rep.direction = BoundDirection::lower;
  rep.context = {1, m.describe(), t, 0};
  rep.pass = lhs >= rhs - 1e-10;
  return rep;
}

IntervalUnion random_interval_union(std::uint64_t seed, std::uint64_t index) {
  const Measure1D g = Measure1D::gaussian(0.0, 4.0);
  std::uint64_t stream = 0;
  auto u = [&] { return rng::uniform(seed, index, stream++); };
  const std::size_t pieces = 1 + static_cast<std::size_t>(u() * 4.0);
  std::vector<double> ends(2 * pieces);
  for (double& e : ends) e = g.sample_quantile(u());
  std::sort(ends.begin(), ends.end());
  std::vector<Interval> parts;
  for (std::size_t k = 0; k < pieces; ++k) {
    double lo = ends[2 * k];
    double hi = ends[2 * k + 1];
    if (u() < 0.15) hi = lo;  // single point
    parts.push_back({lo, hi, u() < 0.5 || lo == hi, u() < 0.5 || lo == hi});
  }
  if (u() < 0.25) parts.front().lo = -kInf;
  if (u() < 0.25) parts.back().hi = kInf;
  for (auto& p : parts) {
    if (!std::isfinite(p.lo)) p.lo_closed = false;
    if (!std::isfinite(p.hi)) p.hi_closed = false;
  }
  return IntervalUnion(std::move(parts));
}

TransitiveIsoResult check_transitive_iso(const SetDescriptor& a, const ProductSpace& space,
                                         const std::vector<double>& r_schedule, const McConfig& cfg,
                                         const Regime& regime, const Baselines& baselines) {
  const std::size_t n = a.dim();
  if (n < 2) throw DomainError("check_transitive_iso: n must be >= 2");
  TransitiveIsoResult res;
  res.boundary = boundary_estimate(a, space, r_schedule, cfg);
  const double t = std::clamp(res.boundary.measure.value, 0.0, 1.0);
  const double lhs = std::max(0.0, res.boundary.limit.value);
  const double rhs = t * (1.0 - t) * kkl_scale(n, regime);
  res.report = make_report("transitive_iso", lhs, rhs, baselines.lookup("transitive_iso", regime.context()),
                           BoundDirection::lower, {n, regime.context(), t, cfg.seed});
  res.small_t = t * (1.0 - t) <= 1.0 / static_cast<double>(n);
  if (res.small_t && t > 0.0 && t < 1.0) {
    res.implied_k = lhs / regime.measure().iso_profile(t);
    const double floor_k = baselines.lookup("dimfree_k", regime.context());
    res.report.note = "small t: limit / h(t) = " + short_num(res.implied_k);
    // one-sided: only the upper end of the interval has to clear the floor
    const double hi_k = (lhs + 3.0 * res.boundary.limit.std_error) / regime.measure().iso_profile(t);
    if (hi_k < floor_k) {
      res.report.pass = false;
      res.report.note += " below dimfree_k";
    }
  }
  return res;
}

BoxExact box_exact(std::size_t n, const Measure1D& m) {
  if (n == 0) throw DomainError("box_exact: n must be >= 1");
  const double ln2 = std::log(2.0);
  const double nn = static_cast<double>(n);
  const double p = std::exp(-ln2 / nn);
  const double q = -std::expm1(-ln2 / nn);
  BoxExact b;
  b.n = n;
  b.a_n = p <= 0.5 ? m.quantile(p) : m.upper_quantile(q);
  b.influence = std::exp(-ln2 * (nn - 1.0) / nn) * m.density(b.a_n);
  b.sum = nn * b.influence;
  return b;
}

SetDescriptor box_family(std::size_t n, const Measure1D& m) {
  return SetDescriptor::box_lower(std::vector<double>(n, box_exact(n, m).a_n));
}

}  // namespace geoinf
