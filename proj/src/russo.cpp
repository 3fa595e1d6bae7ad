#include "geoinf/russo.hpp"

#include <cmath>

#include "geoinf/error.hpp"

namespace geoinf {
namespace {

constexpr double kStepCoarse = 1e-2;
constexpr double kStepFine = 1e-3;
constexpr double kAlphaLo = -20.0;
constexpr double kAlphaHi = 20.0;

void require_increasing(const SetDescriptor& a, const char* who) {
  const auto mono = a.monotonicity();
  if (mono && *mono == Monotonicity::decreasing) {
    throw DomainError(std::string(who) + ": set must be increasing");
  }
}

bool shifted_contains(const SetDescriptor& a, std::span<const double> x, double alpha, std::vector<double>& buf) {
  for (std::size_t j = 0; j < x.size(); ++j) buf[j] = x[j] + alpha;
  return a.contains(buf);
}

double measure_at(const SetDescriptor& a, const ProductSpace& base, double alpha, const McConfig& cfg) {
  const Moments mom = monte_carlo(base, cfg, 1, [&] {
    return [&, buf = std::vector<double>(a.dim())](std::span<const double> x, std::span<double> out) mutable {
      out[0] = shifted_contains(a, x, alpha, buf) ? 1.0 : 0.0;
    };
  });
  return mom.mean(0);
}

}  // namespace

ThresholdCurve measure_curve(const SetDescriptor& a, const Measure1D& m, const std::vector<double>& alpha_grid,
                             const McConfig& cfg) {
  require_increasing(a, "measure_curve");
  const std::size_t n = a.dim();
  const ProductSpace base = ProductSpace::homogeneous(m, n);
  const std::size_t g = alpha_grid.size();
  const Moments mom = monte_carlo(base, cfg, g, [&] {
    return [&, buf = std::vector<double>(n)](std::span<const double> x, std::span<double> out) mutable {
      for (std::size_t k = 0; k < g; ++k) out[k] = shifted_contains(a, x, alpha_grid[k], buf) ? 1.0 : 0.0;
    };
  });
  ThresholdCurve c;
  c.alpha = alpha_grid;
  c.n = n;
  c.seed = cfg.seed;
  for (std::size_t k = 0; k < g; ++k) c.values.push_back(mom.estimate(k));
  return c;
}

RussoCheck russo_check(const SetDescriptor& a, const Measure1D& m, double alpha, const McConfig& cfg) {
  require_increasing(a, "russo_check");
  const std::size_t n = a.dim();
  const ProductSpace base = ProductSpace::homogeneous(m, n);
  const ProductSpace shifted = ProductSpace::homogeneous(m.translated(alpha), n);
  const Measure1D& ma = shifted.factor(0);
  const double h1 = kStepCoarse, h2 = kStepFine;
  const double w = 1.0 / (h1 * h1 - h2 * h2);

  // Layout: [D(h1), D(h2), richardson, influence sum, richardson - sum]
  const Moments mom = monte_carlo(base, cfg, 5, [&] {
    return [&, buf = std::vector<double>(n), y = std::vector<double>(n),
            ws = FiberWorkspace{}](std::span<const double> x, std::span<double> out) mutable {
      const double d1 = ((shifted_contains(a, x, alpha + h1, buf) ? 1.0 : 0.0) -
                         (shifted_contains(a, x, alpha - h1, buf) ? 1.0 : 0.0)) / (2.0 * h1);
      const double d2 = ((shifted_contains(a, x, alpha + h2, buf) ? 1.0 : 0.0) -
                         (shifted_contains(a, x, alpha - h2, buf) ? 1.0 : 0.0)) / (2.0 * h2);
      const double rich = (h1 * h1 * d2 - h2 * h2 * d1) * w;
      for (std::size_t j = 0; j < n; ++j) y[j] = x[j] + alpha;
      all_fibers(a, y, shifted, ws);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += minkowski_content(ws.fibers[i], ma);
      out[0] = d1;
      out[1] = d2;
      out[2] = rich;
      out[3] = sum;
      out[4] = rich - sum;
    };
  });

  RussoCheck r;
  r.alpha = alpha;
  r.finite_difference = mom.mean(2);
  r.fd_std_error = mom.std_error(2);
  r.influence_sum = mom.mean(3);
  r.influence_std_error = mom.std_error(3);
  r.discrepancy = mom.mean(4);
  r.combined_std_error = mom.std_error(4);
  r.pass = std::fabs(r.discrepancy) <= 0.02 * std::fabs(r.influence_sum) + 3.0 * r.combined_std_error;
  return r;
}

double threshold_alpha(const SetDescriptor& a, const Measure1D& m, double delta, const McConfig& cfg) {
  require_increasing(a, "threshold_alpha");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("threshold_alpha: delta outside (0, 1)");
  const ProductSpace base = ProductSpace::homogeneous(m, a.dim());
  double lo = kAlphaLo, hi = kAlphaHi;
  if (measure_at(a, base, lo, cfg) > delta || measure_at(a, base, hi, cfg) < delta) {
    throw DomainError("threshold_alpha: curve does not cross delta on [-20, 20]");
  }
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    if (measure_at(a, base, mid, cfg) < delta) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double max_threshold_alpha(double level, std::size_t n, double delta, const Measure1D& m) {
  if (n == 0) throw DomainError("max_threshold_alpha: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("max_threshold_alpha: delta outside (0, 1)");
  const double lp = std::log1p(-delta) / static_cast<double>(n);
  const double p = std::exp(lp);
  const double x = p <= 0.5 ? m.quantile(p) : m.upper_quantile(-std::expm1(lp));
  return level - x;
}

double max_threshold_width(std::size_t n, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("max_threshold_width: eps outside (0, 1/2)");
  const Measure1D g = Measure1D::gaussian();
  return max_threshold_alpha(0.0, n, 1.0 - eps, g) - max_threshold_alpha(0.0, n, eps, g);
}

BoundReport width_report(double width, std::size_t n, double eps, const Baselines& baselines, std::uint64_t seed) {
  if (n < 2) throw DomainError("width: n must be >= 2");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("width: eps outside (0, 1/2)");
  const double rhs = std::log(1.0 / (2.0 * eps)) / std::sqrt(std::log(static_cast<double>(n)));
  return make_report("width", width, rhs, baselines.get("width"), BoundDirection::upper,
                     {n, "gaussian", eps, seed});
}

BoundReport width_check(const SetDescriptor& a, double eps, const McConfig& cfg, const Baselines& baselines) {
  const Measure1D g = Measure1D::gaussian();
  const double w = threshold_alpha(a, g, 1.0 - eps, cfg) - threshold_alpha(a, g, eps, cfg);
  return width_report(w, a.dim(), eps, baselines, cfg.seed);
}

PowerReport max_test_power(double theta0, double theta1, double beta, std::size_t n) {
  if (n == 0) throw DomainError("max_test_power: n must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("max_test_power: beta outside (0, 1)");
  if (!std::isfinite(theta0) || !std::isfinite(theta1) || theta1 < theta0) {
    throw DomainError("max_test_power: need finite theta1 >= theta0");
  }
  const Measure1D g = Measure1D::gaussian();
  PowerReport r{theta0, theta1, beta, n, 0.0, 0.0};
  // K = theta0 + quantile((1 - beta)^{1/n})
  r.critical = theta0 - max_threshold_alpha(0.0, n, beta, g);
  const double tail = g.sf(r.critical - theta1);
  r.power = -std::expm1(static_cast<double>(n) * std::log1p(-tail));
  return r;
}

double power_separation(double c, double beta, std::size_t n) {
  if (n < 2) throw DomainError("power_separation: n must be >= 2");
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("power_separation: beta outside (0, 1/2)");
  return c * std::log(1.0 / (2.0 * beta)) / std::sqrt(std::log(static_cast<double>(n)));
}

}  // namespace geoinf
