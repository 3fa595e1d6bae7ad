#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geoinf/bounds.hpp"
#include "geoinf/error.hpp"
#include "geoinf/influence.hpp"

using namespace geoinf;

namespace {

const double kPhi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double phi(double x) { return kPhi0 * std::exp(-0.5 * x * x); }

// E_y[phi((b - v y) / w) / w] with y ~ N(0,1): the fiber endpoint density of a
// 2-d half-space, integrated directly.
double halfspace_influence_quad(double ui, double uj, double b) {
  auto f = [&](double y) { return phi(y) * std::fabs(ui) * phi((b - uj * y) / std::fabs(ui)) / std::fabs(ui); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -12.0, 12.0, 10, 1e-14);
}

const SetDescriptor& decreasing_oracle() {
  static const SetDescriptor a = SetDescriptor::monotone_oracle(
      3, [](std::span<const double> x) { return x[0] + 0.5 * x[1] * std::fabs(x[1]) + 0.3 * x[2] <= 0.2; },
      Monotonicity::decreasing);
  return a;
}

void check_close(const InfluenceEstimate& e, double exact, double k = 3.0) {
  CHECK_MESSAGE(std::fabs(e.value - exact) <= k * e.std_error + 1e-12, "value ", e.value, " exact ", exact,
                " se ", e.std_error);
}

}  // namespace

TEST_CASE("geometric influence examples") {
  const ProductSpace g2 = ProductSpace::homogeneous(Measure1D::gaussian(), 2);
  const McConfig cfg(11, 40000);
  SUBCASE("diagonal half-space") {
    const SetDescriptor a = SetDescriptor::halfspace({1, 1}, 0);
    const double oracle = halfspace_influence_quad(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0.0);
    CHECK(oracle == doctest::Approx(0.2820948).epsilon(1e-6));
    check_close(geometric_influence(a, g2, 0, cfg), oracle);
  }
  SUBCASE("skew half-space against quadrature") {
    const SetDescriptor a = SetDescriptor::halfspace({0.6, 0.8}, 0.4);
    const double oracle = halfspace_influence_quad(0.6, 0.8, 0.4);
    CHECK(oracle == doctest::Approx(0.6 * phi(0.4)).epsilon(1e-10));
    check_close(geometric_influence(a, g2, 0, cfg), oracle);
  }
  SUBCASE("axis half-space") {
    const SetDescriptor a = SetDescriptor::halfspace({1, 0}, 0);
    const InfluenceEstimate i1 = geometric_influence(a, g2, 0, cfg);
    CHECK(i1.value == doctest::Approx(kPhi0).epsilon(1e-12));
    CHECK(geometric_influence(a, g2, 1, cfg).value == 0.0);
    CHECK(i1.samples == 40000);
    CHECK(i1.seed == 11);
  }
  SUBCASE("box family") {
    for (double rho : {1.5, 2.0, 3.0}) {
      const Measure1D m = Measure1D::boltzmann(rho);
      const std::size_t n = 5;
      const BoxExact ex = box_exact(n, m);
      const InfluenceEstimate e = geometric_influence(box_family(n, m), ProductSpace::homogeneous(m, n), 2, cfg);
      check_close(e, ex.influence);
    }
  }
  CHECK_THROWS_AS(geometric_influence(SetDescriptor::halfspace({1, 0}, 0), g2, 2, cfg), DomainError);
}

TEST_CASE("h-influence examples") {
  const ProductSpace g2 = ProductSpace::homogeneous(Measure1D::gaussian(), 2);
  const SetDescriptor a = SetDescriptor::halfspace({1, 0}, 0);
  const McConfig cfg(3, 1000);
  CHECK(h_influence(a, g2, HProfile::variance(), 0, cfg).value == doctest::Approx(0.25));
  CHECK(h_influence(a, g2, HProfile::entropy(), 0, cfg).value == doctest::Approx(std::log(2.0)));
  CHECK(h_influence(a, g2, HProfile::entropy(), 1, cfg).value == 0.0);
}

TEST_CASE("entropy and theta") {
  CHECK(entropy(0.5) == doctest::Approx(std::log(2.0)));
  CHECK(entropy(0.0) == 0.0);
  CHECK(entropy(1.0) == 0.0);
  CHECK(std::fabs(entropy_inverse(entropy(0.1)) - 0.1) < 1e-10);
  CHECK_THROWS_AS(entropy(-0.1), DomainError);
  CHECK_THROWS_AS(entropy_inverse(1.0), DomainError);
  CHECK(theta(0.25) == doctest::Approx(0.25 / (-2.0 * std::log(0.25))).epsilon(1e-14));
  CHECK(theta(0.25) == doctest::Approx(0.0901680).epsilon(1e-6));
  CHECK_THROWS_AS(theta(0.0), DomainError);
  CHECK_THROWS_AS(theta(0.6), DomainError);
  double prev = 0.0;
  for (double y = 1e-6; y <= 0.5; y *= 1.2) {
    CHECK(theta(y) > prev);
    prev = theta(y);
  }
}

TEST_CASE("theta against the entropy inverse") {
  // holds for small y only; the two curves cross near y = 0.0694
  for (double y = 1e-6; y <= 0.069; y *= 1.1) CHECK(theta(y) <= entropy_inverse(y));
  for (double y : {0.071, 0.2, 0.5}) CHECK(theta(y) > entropy_inverse(y));
}

TEST_CASE("profiles vanish at the ends and are concave") {
  for (const HProfile& h : {HProfile::entropy(), HProfile::variance(), HProfile::iso_profile(Measure1D::gaussian()),
                            HProfile::iso_profile(Measure1D::boltzmann(1.5)),
                            HProfile::iso_profile(Measure1D::boltzmann(3))}) {
    CHECK(h(0.0) == 0.0);
    CHECK(h(1.0) == 0.0);
    for (int k = 1; k < 999; ++k) {
      const double a = k / 1000.0;
      const double b = a + 0.001;
      const double mid = 0.5 * (a + b);
      CHECK(h(mid) >= 0.5 * (h(a) + h(b)) - 1e-9);
    }
  }
}

TEST_CASE("ent_to_h bound") {
  for (double i : {0.01, 0.1, 0.5}) {
    CHECK(ent_to_h_delta(HProfile::entropy(), i) == doctest::Approx(1.0));
    CHECK(ent_to_h_bound(HProfile::entropy(), i) == doctest::Approx(i / 2));
    CHECK(ent_to_h_bound(HProfile::scaled(HProfile::entropy(), 2.0), i) == doctest::Approx(i));
  }
  CHECK_THROWS_AS(ent_to_h_bound(HProfile::entropy(), 0.0), DomainError);
  CHECK_THROWS_AS(ent_to_h_bound(HProfile::entropy(), 0.8), DomainError);

  SUBCASE("grid minimum agrees with a dense brute force") {
    const HProfile h = HProfile::iso_profile(Measure1D::boltzmann(2));
    const double lo = theta(0.05);
    double best = 1e300;
    for (int k = 0; k <= 200000; ++k) {
      const double t = lo + (1.0 - 2.0 * lo) * k / 200000.0;
      best = std::min(best, h(t) / entropy(t));
    }
    CHECK(ent_to_h_delta(h, 0.1) <= best + 1e-9);
    CHECK(ent_to_h_delta(h, 0.1) >= best * (1.0 - 1e-6));
  }
  SUBCASE("iso profile bound is below the measured h-influence of the box") {
    const Measure1D m = Measure1D::boltzmann(2);
    const std::size_t n = 4;
    const SetDescriptor a = box_family(n, m);
    const ProductSpace sp = ProductSpace::homogeneous(m, n);
    const McConfig cfg(5, 20000);
    const InfluenceEstimate ent = h_influence(a, sp, HProfile::entropy(), 0, cfg);
    const InfluenceEstimate iso = h_influence(a, sp, HProfile::iso_profile(m), 0, cfg);
    const double bound = ent_to_h_bound(HProfile::iso_profile(m), 0.1);
    CHECK(bound > 0.0);
    CHECK(bound <= iso.value);
    CHECK(ent_to_h_bound(HProfile::iso_profile(m), ent.value) <= iso.value + 3 * iso.std_error);
  }
}

TEST_CASE("influence profile") {
  const McConfig cfg(8, 20000);
  SUBCASE("transitive set has equal influences") {
    const ProductSpace sp = ProductSpace::homogeneous(Measure1D::gaussian(), 4);
    const InfluenceProfile p = influence_profile(SetDescriptor::max_threshold(4, 1.0), sp, cfg);
    for (std::size_t i = 1; i < 4; ++i) {
      const double se = std::hypot(p.coords[0].std_error, p.coords[i].std_error);
      CHECK(std::fabs(p.coords[0].value - p.coords[i].value) <= 3 * se);
    }
    const double exact = 4 * phi(1.0) * std::pow(0.5 * std::erfc(-1.0 / std::sqrt(2.0)), 3);
    CHECK(std::fabs(p.sum.value - exact) <= 3 * p.sum.std_error);
  }
  SUBCASE("half-space sum is |u|_1 phi(0)") {
    const std::vector<double> u{0.5, -0.5, 0.5, 0.5};
    const InfluenceProfile p = influence_profile(SetDescriptor::halfspace(u, 0), ProductSpace::homogeneous(Measure1D::gaussian(), 4), cfg);
    CHECK(std::fabs(p.sum.value - 2.0 * kPhi0) <= 3 * p.sum.std_error + 1e-12);
    for (const auto& c : p.coords) CHECK(std::fabs(c.value - 0.5 * kPhi0) <= 3 * c.std_error + 1e-12);
    CHECK(p.max == std::max({p.coords[0].value, p.coords[1].value, p.coords[2].value, p.coords[3].value}));
  }
  SUBCASE("one dimension") {
    const InfluenceProfile p = influence_profile(SetDescriptor::box_lower({0.0}),
                                                 ProductSpace::homogeneous(Measure1D::gaussian(), 1), cfg);
    REQUIRE(p.coords.size() == 1);
    CHECK(p.coords[0].value == doctest::Approx(kPhi0));
    CHECK(p.argmax == 0);
  }
  SUBCASE("profile matches per-coordinate estimates") {
    const ProductSpace sp = ProductSpace::homogeneous(Measure1D::boltzmann(1.5), 3);
    const SetDescriptor a = SetDescriptor::l2_ball({0.2, 0, 0}, 1.3);
    const InfluenceProfile p = influence_profile(a, sp, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      const InfluenceEstimate e = geometric_influence(a, sp, i, cfg);
      CHECK(e.value == doctest::Approx(p.coords[i].value).epsilon(1e-12));
    }
  }
}

TEST_CASE("iso profile equality for monotone sets") {
  const McConfig cfg(21, 20000);
  for (double rho : {1.5, 2.0}) {
    const Measure1D m = Measure1D::boltzmann(rho);
    for (const SetDescriptor& a : {box_family(3, m), SetDescriptor::max_threshold(3, 0.4), decreasing_oracle()}) {
      const auto pairs = paired_influences(a, ProductSpace::homogeneous(m, 3), HProfile::iso_profile(m), cfg);
      for (const auto& p : pairs) CHECK(std::fabs(p.difference) <= 3 * p.difference_std_error + 1e-12);
    }
  }
}

TEST_CASE("geometric influence against the entropy route") {
  const McConfig cfg(23, 20000);
  for (double rho : {1.5, 2.0, 3.0}) {
    const Measure1D m = Measure1D::boltzmann(rho);
    const HProfile iso = HProfile::iso_profile(m);
    for (const SetDescriptor& a : {box_family(4, m), SetDescriptor::max_threshold(4, 1.2), decreasing_oracle()}) {
      const std::size_t n = a.dim();
      const ProductSpace sp = ProductSpace::homogeneous(m, n);
      const InfluenceProfile g = influence_profile(a, sp, cfg);
      const InfluenceProfile e = h_profile(a, sp, HProfile::entropy(), cfg);
      for (std::size_t i = 0; i < n; ++i) {
        if (e.coords[i].value <= 0.0) continue;
        CHECK(g.coords[i].value >= ent_to_h_bound(iso, e.coords[i].value) - 3 * g.coords[i].std_error);
      }
    }
  }
}

TEST_CASE("geometric influence dominates the iso h-influence") {
  const McConfig cfg(22, 20000);
  const Measure1D m = Measure1D::gaussian();
  for (const SetDescriptor& a :
       {SetDescriptor::l2_ball({0, 0, 0}, 1.5), SetDescriptor::complement(SetDescriptor::box_lower({0.3, 0.3, 0.3})),
        SetDescriptor::l2_ball({0.5, -0.5, 0}, 0.7)}) {
    const auto pairs = paired_influences(a, ProductSpace::homogeneous(m, 3), HProfile::iso_profile(m), cfg);
    for (const auto& p : pairs) CHECK(p.difference >= -3 * p.difference_std_error);
  }
}

TEST_CASE("complement has the same influences") {
  const ProductSpace sp = ProductSpace::homogeneous(Measure1D::gaussian(), 3);
  const McConfig cfg(4, 20000);
  const SetDescriptor a = SetDescriptor::l2_ball({0, 0.3, 0}, 1.1);
  const InfluenceProfile p = influence_profile(a, sp, cfg);
  const InfluenceProfile q = influence_profile(SetDescriptor::complement(a), sp, cfg);
  for (std::size_t i = 0; i < 3; ++i) CHECK(p.coords[i].value == doctest::Approx(q.coords[i].value).epsilon(1e-12));
}

TEST_CASE("estimates do not depend on the worker count") {
  const ProductSpace sp = ProductSpace::homogeneous(Measure1D::boltzmann(1.5), 5);
  const SetDescriptor a = SetDescriptor::sum_threshold(5, 0.3);
  const InfluenceProfile one = influence_profile(a, sp, McConfig(77, 5000, 1));
  const InfluenceProfile four = influence_profile(a, sp, McConfig(77, 5000, 4));
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(one.coords[i].value == four.coords[i].value);
    CHECK(one.coords[i].std_error == four.coords[i].std_error);
  }
}
