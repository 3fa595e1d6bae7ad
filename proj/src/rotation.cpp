#include "geoinf/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>

#include "geoinf/error.hpp"
#include "geoinf/influence.hpp"
#include "geoinf/rng.hpp"

namespace geoinf {
namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Mat to_eigen(const SquareMatrix& m) {
  const std::size_t n = m.dim();
  Mat e(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) e(r, c) = m(r, c);
  return e;
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

// P(|c + Z|^2 <= rad^2), Z standard Gaussian in R^n.
double ball_probability(const std::vector<double>& c, double rad) {
  const double df = static_cast<double>(c.size());
  double lambda = 0.0;
  for (double v : c) lambda += v * v;
  const double x = rad * rad;
  if (x <= 0.0) return 0.0;
  if (lambda == 0.0) return boost::math::cdf(boost::math::chi_squared_distribution<double>(df), x);
  return boost::math::cdf(boost::math::non_central_chi_squared_distribution<double>(df, lambda), x);
}

}  // namespace

std::uint64_t rotation_seed(std::uint64_t seed, std::size_t j) { return rng::derive(seed, 0x726f74ULL + j); }

OrthogonalMatrix haar_sample(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("haar_sample: n must be >= 1");
  const Measure1D g = Measure1D::gaussian();
  Eigen::MatrixXd z(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) z(r, c) = g.sample_quantile(rng::uniform(seed, r, c));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& rr = qr.matrixQR();
  for (std::size_t c = 0; c < n; ++c) {
    if (rr(c, c) < 0.0) q.col(c) *= -1.0;
  }
  OrthogonalMatrix out{SquareMatrix(n), seed};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out.m(r, c) = q(r, c);
  return out;
}

double orthogonality_error(const SquareMatrix& m) {
  const Mat e = to_eigen(m);
  const Mat d = e.transpose() * e - Mat::Identity(e.rows(), e.cols());
  return d.cwiseAbs().maxCoeff();
}

double determinant(const SquareMatrix& m) { return to_eigen(m).determinant(); }

SetDescriptor rotate_set(const SetDescriptor& a, const SquareMatrix& m) {
  if (m.dim() != a.dim()) throw DomainError("rotate_set: dimension mismatch");
  if (const auto* h = a.as<shape::Halfspace>()) return SetDescriptor::halfspace(m.apply(h->normal), h->offset);
  if (const auto* b = a.as<shape::Ball>()) return SetDescriptor::l2_ball(m.apply(b->center), b->radius);
  if (const auto* r = a.as<shape::Rotated>()) return SetDescriptor::rotated(*r->base, m * r->g);
  if (const auto* c = a.as<shape::Complement>()) return SetDescriptor::complement(rotate_set(*c->base, m));
  return SetDescriptor::rotated(a, m);
}

std::vector<double> halfspace_influences_exact(std::span<const double> u, double b) {
  double norm = 0.0;
  for (double v : u) norm += v * v;
  if (std::fabs(std::sqrt(norm) - 1.0) > 1e-9) throw DomainError("halfspace_influences_exact: u must be a unit vector");
  const double dens = std_normal_pdf(b);
  std::vector<double> out;
  out.reserve(u.size());
  for (double v : u) out.push_back(std::fabs(v) * dens);
  return out;
}

std::vector<double> halfspace_rotation_sums(std::span<const double> u, double b, std::size_t rotations,
                                            std::uint64_t seed) {
  const std::size_t n = u.size();
  halfspace_influences_exact(u, b);  // validates u
  std::vector<double> sums;
  sums.reserve(rotations);
  for (std::size_t j = 0; j < rotations; ++j) {
    const OrthogonalMatrix m = haar_sample(n, rotation_seed(seed, j));
    sums.push_back(l1(m.m.apply(u)) * std_normal_pdf(b));
  }
  return sums;
}

double gaussian_measure_exact(const SetDescriptor& a) {
  const Measure1D g = Measure1D::gaussian();
  if (const auto* h = a.as<shape::Halfspace>()) return g.cdf(h->offset);
  if (const auto* b = a.as<shape::Ball>()) return ball_probability(b->center, b->radius);
  if (const auto* c = a.as<shape::Complement>()) return 1.0 - gaussian_measure_exact(*c->base);
  if (const auto* r = a.as<shape::Rotated>()) return gaussian_measure_exact(*r->base);
  throw CapabilityError("no exact Gaussian measure for " + a.describe());
}

RotationScan rotation_scan(const SetDescriptor& a, std::size_t rotations, const McConfig& cfg,
                           const Baselines& baselines) {
  if (rotations == 0) throw DomainError("rotation_scan: need at least one rotation");
  if (!a.is_convex()) throw DomainError("rotation_scan: set must be convex");
  const std::size_t n = a.dim();
  const ProductSpace space = ProductSpace::homogeneous(Measure1D::gaussian(), n);

  RotationScan scan;
  try {
    scan.measure = {gaussian_measure_exact(a), 0.0};
  } catch (const CapabilityError&) {
    scan.measure = measure_mc(a, space, cfg);
  }
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t j = 0; j < rotations; ++j) {
    const OrthogonalMatrix m = haar_sample(n, rotation_seed(cfg.seed, j));
    const InfluenceProfile p = influence_profile(rotate_set(a, m.m), space, cfg);
    scan.sums.push_back(p.sum);
    sum += p.sum.value;
    sum_sq += p.sum.value * p.sum.value;
    if (j == 0 || p.sum.value > scan.max) {
      scan.max = p.sum.value;
      scan.argmax = j;
    }
  }
  const double k = static_cast<double>(rotations);
  scan.mean = sum / k;
  const double var = rotations > 1 ? std::max(0.0, (sum_sq - sum * sum / k) / (k - 1.0)) : 0.0;
  scan.mean_std_error = std::sqrt(var / k);

  const double t = std::clamp(scan.measure.value, 0.0, 1.0);
  const double v = t * (1.0 - t);
  const double rhs = v > 0.0 ? std::sqrt(static_cast<double>(n)) * v * std::sqrt(-std::log(v)) : 0.0;
  scan.report = make_report("rotation", scan.mean, rhs, baselines.get("rotation"), BoundDirection::lower,
                            {n, "gaussian", t, cfg.seed});
  return scan;
}

CubeEnlargement random_cube_enlargement(const SetDescriptor& a, double r, double k_const, CubeScale scale,
                                        std::size_t rotations, const McConfig& cfg) {
  if (!(r > 0.0)) throw DomainError("random_cube_enlargement: r must be positive");
  if (!(k_const > 0.0)) throw DomainError("random_cube_enlargement: K must be positive");
  if (rotations == 0) throw DomainError("random_cube_enlargement: need at least one rotation");
  const std::size_t n = a.dim();
  const double nn = static_cast<double>(n);
  const auto* half = a.as<shape::Halfspace>();
  const auto* ball = a.as<shape::Ball>();
  if (!half && !ball) throw CapabilityError("random_cube_enlargement: only half-spaces and balls are supported");
  if (scale == CubeScale::log_factor && n < 2) throw DomainError("random_cube_enlargement: log factor needs n >= 2");

  CubeEnlargement out;
  out.s = scale == CubeScale::regular ? k_const / std::sqrt(nn) : k_const * std::sqrt(std::log(nn) / nn);
  const double reach = scale == CubeScale::regular ? r / 3.0 : r;
  const double half_width = out.s * r;
  const Measure1D g = Measure1D::gaussian();
  const ProductSpace space = ProductSpace::homogeneous(g, n);

  // A + Mᵀ C is M-conjugate to M A + C, and the Gaussian product is rotation
  // invariant, so each rotation reduces to an axis-aligned enlargement.
  double sum = 0.0, sum_sq = 0.0, mc_var = 0.0;
  for (std::size_t j = 0; j < rotations; ++j) {
    const OrthogonalMatrix m = haar_sample(n, rotation_seed(cfg.seed, j));
    double v = 0.0;
    if (half) {
      v = g.cdf(half->offset + half_width * l1(m.m.apply(half->normal)));
    } else {
      const auto grown = SetDescriptor::cube_dilated_ball(m.m.apply(ball->center), ball->radius, half_width);
      const Estimate e = measure_mc(grown, space, cfg);
      v = e.value;
      mc_var += e.std_error * e.std_error;
    }
    sum += v;
    sum_sq += v * v;
  }
  const double k = static_cast<double>(rotations);
  const double mean = sum / k;
  const double var = rotations > 1 ? std::max(0.0, (sum_sq - sum * sum / k) / (k - 1.0)) : 0.0;
  out.lhs = {mean, std::sqrt(var / k + mc_var / (k * k))};

  if (half) {
    out.measure = g.cdf(half->offset);
    out.neighbourhood = g.cdf(half->offset + reach);
  } else {
    out.measure = ball_probability(ball->center, ball->radius);
    out.neighbourhood = ball_probability(ball->center, ball->radius + reach);
  }
  out.rhs = out.measure + 0.5 * (out.neighbourhood - out.measure);
  out.pass = out.lhs.value >= out.rhs - 3.0 * out.lhs.std_error;
  return out;
}

}  // namespace geoinf
