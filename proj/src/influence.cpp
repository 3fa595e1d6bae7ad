#include "geoinf/influence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "geoinf/error.hpp"

namespace geoinf {

// ------------------------------------------------------------- profiles

HProfile HProfile::entropy() {
  return HProfile("entropy", [](double t) { return geoinf::entropy(std::clamp(t, 0.0, 1.0)); });
}

HProfile HProfile::variance() {
  return HProfile("variance", [](double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * (1.0 - t);
  });
}

HProfile HProfile::iso_profile(const Measure1D& m) {
  return HProfile("iso_profile(" + m.describe() + ")", [m](double t) {
    if (!(t > 0.0) || !(t < 1.0)) return 0.0;
    return m.iso_profile(t);
  });
}

HProfile HProfile::scaled(const HProfile& base, double factor) {
  if (!(factor > 0.0)) throw DomainError("HProfile::scaled: factor must be positive");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g*", factor);
  return HProfile(buf + base.name_, [fn = base.fn_, factor](double t) { return factor * fn(t); });
}

HProfile HProfile::custom(std::string name, Fn fn) {
  if (!fn) throw DomainError("HProfile::custom: empty function");
  return HProfile(std::move(name), std::move(fn));
}

// ------------------------------------------------------ entropy helpers

double entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("entropy: argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double entropy_inverse(double y) {
  const double top = std::log(2.0);
  if (!(y >= 0.0 && y <= top + 1e-15)) throw DomainError("entropy_inverse: argument outside [0, log 2]");
  if (y == 0.0) return 0.0;
  if (y >= top) return 0.5;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (entropy(mid) < y) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double theta(double y) {
  if (!(y > 0.0 && y <= 0.5)) throw DomainError("theta: argument outside (0, 1/2]");
  return y / (-2.0 * std::log(y));
}

namespace {

double ratio(const HProfile& h, double t) { return h(t) / entropy(t); }

// Golden-section minimum of f on [a, b].
template <class F>
double golden_min(F&& f, double a, double b, double best) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-14 * std::max(1.0, std::fabs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::min({best, fc, fd});
}

}  // namespace

double ent_to_h_delta(const HProfile& h, double i_ent) {
  if (!(i_ent > 0.0 && i_ent <= std::log(2.0) + 1e-15)) {
    throw DomainError("ent_to_h_bound: I_ent must lie in (0, log 2]");
  }
  const double a = theta(i_ent / 2.0);
  constexpr std::size_t kHalf = 5000;
  // Left half geometric from a to 1/2; right half mirrored.
  std::vector<double> grid;
  grid.reserve(2 * kHalf);
  for (std::size_t k = 0; k < kHalf; ++k) {
    grid.push_back(a * std::pow(0.5 / a, static_cast<double>(k) / static_cast<double>(kHalf - 1)));
  }
  for (std::size_t k = kHalf; k-- > 0;) grid.push_back(1.0 - grid[k]);

  std::size_t arg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = ratio(h, grid[k]);
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  const double lo = grid[arg == 0 ? 0 : arg - 1];
  const double hi = grid[std::min(arg + 1, grid.size() - 1)];
  if (hi > lo) best = golden_min([&](double t) { return ratio(h, t); }, lo, hi, best);
  return best;
}

double ent_to_h_bound(const HProfile& h, double i_ent) { return 0.5 * ent_to_h_delta(h, i_ent) * i_ent; }

// ------------------------------------------------------------ estimators

std::vector<double> InfluenceProfile::values() const {
  std::vector<double> v;
  v.reserve(coords.size());
  for (const auto& c : coords) v.push_back(c.value);
  return v;
}

namespace {

void check_coordinate(const SetDescriptor& a, const ProductSpace& space, std::size_t i) {
  if (a.dim() != space.dim()) throw DomainError("set and product space differ in dimension");
  if (i >= a.dim()) throw DomainError("coordinate out of range");
}

InfluenceEstimate single(const Moments& m, std::size_t k, const McConfig& cfg, std::size_t coord) {
  return {m.mean(k), m.std_error(k), m.count(), cfg.seed, coord};
}

InfluenceProfile collect(const Moments& m, std::size_t n, const McConfig& cfg) {
  InfluenceProfile p;
  p.coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.coords.push_back(single(m, i, cfg, i));
    if (i == 0 || p.coords[i].value > p.max) {
      p.max = p.coords[i].value;
      p.argmax = i;
    }
  }
  p.sum = m.estimate(n);
  return p;
}

}  // namespace

InfluenceEstimate geometric_influence(const SetDescriptor& a, const ProductSpace& space, std::size_t i,
                                      const McConfig& cfg) {
  check_coordinate(a, space, i);
  const Measure1D& fi = space.factor(i);
  const Moments m = monte_carlo(space, cfg, 1, [&] {
    return [&](std::span<const double> x, std::span<double> out) {
      out[0] = minkowski_content(fiber(a, i, x, &fi), fi);
    };
  });
  return single(m, 0, cfg, i);
}

InfluenceEstimate h_influence(const SetDescriptor& a, const ProductSpace& space, const HProfile& h,
                              std::size_t i, const McConfig& cfg) {
  check_coordinate(a, space, i);
  const Measure1D& fi = space.factor(i);
  const Moments m = monte_carlo(space, cfg, 1, [&] {
    return [&](std::span<const double> x, std::span<double> out) {
      out[0] = h(fiber(a, i, x, &fi).measure(fi));
    };
  });
  return single(m, 0, cfg, i);
}

InfluenceProfile influence_profile(const SetDescriptor& a, const ProductSpace& space, const McConfig& cfg) {
  const std::size_t n = a.dim();
  if (n != space.dim()) throw DomainError("set and product space differ in dimension");
  const Moments m = monte_carlo(space, cfg, n + 1, [&] {
    return [&, ws = FiberWorkspace{}](std::span<const double> x, std::span<double> out) mutable {
      all_fibers(a, x, space, ws);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = minkowski_content(ws.fibers[i], space.factor(i));
        total += out[i];
      }
      out[n] = total;
    };
  });
  return collect(m, n, cfg);
}

InfluenceProfile h_profile(const SetDescriptor& a, const ProductSpace& space, const HProfile& h,
                           const McConfig& cfg) {
  const std::size_t n = a.dim();
  if (n != space.dim()) throw DomainError("set and product space differ in dimension");
  const Moments m = monte_carlo(space, cfg, n + 1, [&] {
    return [&, ws = FiberWorkspace{}](std::span<const double> x, std::span<double> out) mutable {
      all_fibers(a, x, space, ws);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = h(ws.fibers[i].measure(space.factor(i)));
        total += out[i];
      }
      out[n] = total;
    };
  });
  return collect(m, n, cfg);
}

std::vector<PairedInfluence> paired_influences(const SetDescriptor& a, const ProductSpace& space,
                                               const HProfile& h, const McConfig& cfg) {
  const std::size_t n = a.dim();
  if (n != space.dim()) throw DomainError("set and product space differ in dimension");
  // Layout: [G_0..G_{n-1}, H_0..H_{n-1}, (G-H)_0..(G-H)_{n-1}]
  const Moments m = monte_carlo(space, cfg, 3 * n, [&] {
    return [&, ws = FiberWorkspace{}](std::span<const double> x, std::span<double> out) mutable {
      all_fibers(a, x, space, ws);
      for (std::size_t i = 0; i < n; ++i) {
        const Measure1D& fi = space.factor(i);
        const double g = minkowski_content(ws.fibers[i], fi);
        const double v = h(ws.fibers[i].measure(fi));
        out[i] = g;
        out[n + i] = v;
        out[2 * n + i] = g - v;
      }
    };
  });
  std::vector<PairedInfluence> result(n);
  for (std::size_t i = 0; i < n; ++i) {
    result[i].geometric = single(m, i, cfg, i);
    result[i].h = single(m, n + i, cfg, i);
    result[i].difference = m.mean(2 * n + i);
    result[i].difference_std_error = m.std_error(2 * n + i);
  }
  return result;
}

}  // namespace geoinf
