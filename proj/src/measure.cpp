#include "geoinf/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "geoinf/error.hpp"
#include "geoinf/rng.hpp"
#include "geoinf/special.hpp"

namespace geoinf {
namespace detail {

// Tabulated upper-tail inverse of a standardized symmetric family.
// Grid is uniform in z; s(z) = -log(2 sf(z)) is increasing, so lookups
// binary-search s and interpolate z linearly before a Newton step.
struct SamplingTable {
  std::vector<double> z;
  std::vector<double> s;
};

}  // namespace detail

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
// u is never below 2^-54, so -log(2q) never exceeds ~37; 41 leaves margin.
constexpr double kTableMaxS = 41.0;
constexpr double kTableStep = 0.002;

std::string fmt_num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

// ---------------------------------------------------------------- factories

namespace {

using TableKey = std::pair<int, double>;

template <class Sf>
std::shared_ptr<const detail::SamplingTable> build_table(Sf&& std_sf) {
  auto table = std::make_shared<detail::SamplingTable>();
  for (double z = 0.0;; z += kTableStep) {
    const double s = -std::log(2.0 * std_sf(z));
    table->z.push_back(z);
    table->s.push_back(s);
    if (s > kTableMaxS) break;
  }
  return table;
}

// Function-local so measures built during static initialisation elsewhere are safe.
template <class Sf>
std::shared_ptr<const detail::SamplingTable> cached_table(TableKey key, Sf&& std_sf) {
  static std::mutex mutex;
  static std::map<TableKey, std::shared_ptr<const detail::SamplingTable>> tables;
  std::lock_guard lock(mutex);
  auto& slot = tables[key];
  if (!slot) slot = build_table(std::forward<Sf>(std_sf));
  return slot;
}

}  // namespace

Measure1D Measure1D::boltzmann(double rho) {
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw DomainError("boltzmann: rho must be >= 1");
  Measure1D m;
  m.family_ = Family::boltzmann;
  m.rho_ = rho;
  m.normalizer_ = 2.0 * std::tgamma(1.0 + 1.0 / rho);
  m.table_ = cached_table({0, rho}, [&m](double z) { return m.std_sf(z); });
  return m;
}

Measure1D Measure1D::gaussian(double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean)) {
    throw DomainError("gaussian: variance must be positive and finite");
  }
  Measure1D m;
  m.family_ = Family::gaussian;
  m.rho_ = 2.0;
  m.center_ = mean;
  m.scale_ = std::sqrt(variance);
  m.normalizer_ = std::sqrt(2.0 * std::numbers::pi) * m.scale_;
  m.table_ = cached_table({1, 0.0}, [&m](double z) { return m.std_sf(z); });
  return m;
}

Measure1D Measure1D::uniform01() {
  Measure1D m;
  m.family_ = Family::uniform01;
  m.rho_ = 0.0;
  m.normalizer_ = 1.0;
  return m;
}

Measure1D Measure1D::translated(double alpha) const {
  if (!std::isfinite(alpha)) throw DomainError("translate: alpha must be finite");
  Measure1D m = *this;
  m.shift_ += alpha;
  return m;
}

double Measure1D::stddev() const noexcept {
  switch (family_) {
    case Family::boltzmann:
      return std::sqrt(std::exp(std::lgamma(3.0 / rho_) - std::lgamma(1.0 / rho_)));
    case Family::gaussian:
      return scale_;
    case Family::uniform01:
      return std::sqrt(1.0 / 12.0);
  }
  return 1.0;
}

// ------------------------------------------------------ standardized pieces

double Measure1D::std_density(double z) const noexcept {
  if (family_ == Family::gaussian) return kInvSqrt2Pi * std::exp(-0.5 * z * z);
  return std::exp(-std::pow(std::fabs(z), rho_)) / normalizer_;
}

double Measure1D::std_sf(double z) const noexcept {
  if (family_ == Family::gaussian) return 0.5 * std::erfc(z / kSqrt2);
  if (rho_ == 1.0) return 0.5 * std::exp(-z);
  return 0.5 * special::gamma_q(1.0 / rho_, std::pow(z, rho_));
}

double Measure1D::std_upper_quantile(double q) const {
  if (q >= 0.5) return 0.0;
  // Upper bracket from the tail upper bound c z^{1-rho} e^{-z^rho} >= sf(z)
  // (the Gaussian Mills bound phi(z)/z is the same shape).
  auto tail_upper = [this](double z) {
    if (family_ == Family::gaussian) return std_density(z) / z;
    return tail_bracket(rho_, z).upper;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (tail_upper(hi) > q) {
    if (std_sf(hi) > q) lo = hi;
    hi *= 2.0;
  }
  // Bisection to a coarse bracket.
  while (hi - lo > 1e-3 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (std_sf(mid) > q) lo = mid; else hi = mid;
  }
  // Newton polishing on log sf(z) - log q, safeguarded by the bracket.
  const double log_q = std::log(q);
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double sf = std_sf(z);
    if (sf > q) lo = z; else hi = z;
    const double dens = std_density(z);
    double next = z + (std::log(sf) - log_q) * sf / dens;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - z);
    z = next;
    if (step < 1e-14 * std::max(1.0, z) || hi - lo < 1e-15 * std::max(1.0, z)) break;
  }
  return z;
}

// -------------------------------------------------------------- public API

double Measure1D::density(double x) const noexcept {
  if (family_ == Family::uniform01) {
    const double y = x - shift_;
    return (y >= 0.0 && y <= 1.0) ? 1.0 : 0.0;
  }
  const double z = (x - center_ - shift_) / scale_;
  return std_density(z) / scale_;
}

double Measure1D::cdf(double x) const noexcept {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  if (family_ == Family::uniform01) return std::clamp(x - shift_, 0.0, 1.0);
  const double z = (x - center_ - shift_) / scale_;
  return z >= 0.0 ? 1.0 - std_sf(z) : std_sf(-z);
}

double Measure1D::sf(double x) const noexcept {
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  if (family_ == Family::uniform01) return std::clamp(1.0 - (x - shift_), 0.0, 1.0);
  const double z = (x - center_ - shift_) / scale_;
  return z >= 0.0 ? std_sf(z) : 1.0 - std_sf(-z);
}

double Measure1D::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  if (family_ == Family::uniform01) return p + shift_;
  const double loc = center_ + shift_;
  if (p == 0.5) return loc;
  if (p < 0.5) return loc - scale_ * std_upper_quantile(p);
  return loc + scale_ * std_upper_quantile(1.0 - p);
}

double Measure1D::upper_quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("upper_quantile: q must lie in (0, 1)");
  if (family_ == Family::uniform01) return 1.0 - q + shift_;
  const double loc = center_ + shift_;
  if (q == 0.5) return loc;
  if (q < 0.5) return loc + scale_ * std_upper_quantile(q);
  return loc - scale_ * std_upper_quantile(1.0 - q);
}

double Measure1D::iso_profile(double t) const {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("iso_profile: t must lie in (0, 1)");
  if (family_ == Family::uniform01) return 1.0;
  return density(quantile(std::min(t, 1.0 - t)));
}

double Measure1D::sample_quantile(double u) const {
  if (family_ == Family::uniform01) return u + shift_;
  const double q = u < 0.5 ? u : 1.0 - u;
  double z = 0.0;
  if (q < 0.5) {
    if (family_ == Family::boltzmann && rho_ == 1.0) {
      z = -std::log(2.0 * q);
    } else {
      const double s = -std::log(2.0 * q);
      const auto& tz = table_->z;
      const auto& ts = table_->s;
      if (s >= ts.back()) {
        z = std_upper_quantile(q);
      } else {
        const auto it = std::upper_bound(ts.begin(), ts.end(), s);
        const std::size_t k = static_cast<std::size_t>(it - ts.begin());
        const double w = (s - ts[k - 1]) / (ts[k] - ts[k - 1]);
        z = tz[k - 1] + w * (tz[k] - tz[k - 1]);
        for (int step = 0; step < 2; ++step) {
          const double sf = std_sf(z);
          const double delta = (std::log(sf) + s + std::numbers::ln2) * sf / std_density(z);
          z += delta;
          if (std::fabs(delta) < 1e-9) break;
        }
      }
    }
  }
  const double loc = center_ + shift_;
  return u < 0.5 ? loc - scale_ * z : loc + scale_ * z;
}

std::string Measure1D::describe() const {
  std::string base;
  switch (family_) {
    case Family::boltzmann: base = "boltzmann(rho=" + fmt_num(rho_) + ")"; break;
    case Family::gaussian:
      base = "gaussian(" + fmt_num(center_) + "," + fmt_num(scale_ * scale_) + ")";
      break;
    case Family::uniform01: base = "uniform01"; break;
  }
  if (!is_shifted()) return base;
  return "shifted(" + base + ",alpha=" + fmt_num(shift_) + ")";
}

TailBracket tail_bracket(double rho, double z) {
  if (!(rho >= 1.0)) throw DomainError("tail_bracket: rho must be >= 1");
  if (!(z > 0.0)) throw DomainError("tail_bracket: z must be positive");
  const double c = 1.0 / (2.0 * rho * std::tgamma(1.0 + 1.0 / rho));
  const double e = std::exp(-std::pow(z, rho));
  const double head = std::pow(z, 1.0 - rho);
  return {c * (head - (rho - 1.0) * std::pow(z, -rho)) * e, c * head * e};
}

// ------------------------------------------------------------ product space

ProductSpace::ProductSpace(std::vector<Measure1D> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DomainError("product space needs n >= 1 factors");
}

ProductSpace ProductSpace::homogeneous(const Measure1D& m, std::size_t n) {
  return ProductSpace(std::vector<Measure1D>(n, m));
}

bool ProductSpace::is_homogeneous() const noexcept {
  return std::all_of(factors_.begin(), factors_.end(),
                     [&](const Measure1D& m) { return m == factors_.front(); });
}

void ProductSpace::sample_point(std::uint64_t seed, std::uint64_t index, std::span<double> out) const {
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    out[j] = factors_[j].sample_quantile(rng::uniform(seed, index, j));
  }
}

PointBatch sample(const ProductSpace& space, std::uint64_t seed, std::size_t count) {
  PointBatch batch;
  batch.dim = space.dim();
  batch.data.resize(count * batch.dim);
  for (std::size_t k = 0; k < count; ++k) {
    space.sample_point(seed, k, {batch.data.data() + k * batch.dim, batch.dim});
  }
  return batch;
}

}  // namespace geoinf
