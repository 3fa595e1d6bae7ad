#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "geoinf/error.hpp"
#include "geoinf/interval_union.hpp"
#include "geoinf/rng.hpp"
#include "geoinf/rotation.hpp"
#include "geoinf/set_model.hpp"

using namespace geoinf;

namespace {

const double kPhi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const Measure1D kGauss = Measure1D::gaussian();

std::vector<double> random_point(std::size_t n, std::uint64_t seed, std::uint64_t k, double spread = 1.5) {
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = spread * kGauss.sample_quantile(rng::uniform(seed, k, j));
  return x;
}

// Membership along the fiber on a 1e-4 grid, skipping points within 1e-6 of a component endpoint.
void check_fiber_by_scan(const SetDescriptor& a, std::size_t i, std::vector<double> x) {
  const IntervalUnion f = fiber(a, i, x);
  auto near_end = [&](double y) {
    for (const auto& c : f.components()) {
      if (std::fabs(y - c.lo) < 1e-6 || std::fabs(y - c.hi) < 1e-6) return true;
    }
    return false;
  };
  std::size_t mismatches = 0;
  for (int k = -60000; k <= 60000; ++k) {
    const double y = k * 1e-4;
    if (near_end(y)) continue;
    x[i] = y;
    if (a.contains(x) != f.contains(y)) ++mismatches;
  }
  CHECK_MESSAGE(mismatches == 0, a.describe(), " coordinate ", i, " fiber ", f.describe());
}

}  // namespace

TEST_CASE("interval union structure") {
  const IntervalUnion u({{2, 3, true, true}, {-1, 0, true, false}, {-0.5, 1, true, true}, {5, 5, true, true}});
  REQUIRE(u.size() == 3);
  CHECK(u.components()[0].lo == -1);
  CHECK(u.components()[0].hi == 1);
  CHECK(u.components()[2].degenerate());
  CHECK(u.contains(5));
  CHECK_FALSE(u.contains(4.9));
  // touching sides merge; a missing single point is not a positive gap either
  CHECK(IntervalUnion({{0, 1, true, true}, {1, 2, false, true}}).size() == 1);
  CHECK(IntervalUnion({{0, 1, true, false}, {1, 2, false, true}}).size() == 1);
}

TEST_CASE("interval union algebra") {
  const IntervalUnion a({{-1, 1, true, true}, {3, kInf, true, false}});
  const IntervalUnion c = a.complement();
  REQUIRE(c.size() == 2);
  CHECK(c.components()[0].hi == -1);
  CHECK_FALSE(c.components()[0].hi_closed);
  CHECK(c.complement() == a);
  CHECK(IntervalUnion::empty().complement().is_real_line());
  CHECK(IntervalUnion::real_line().complement().is_empty());
  CHECK(a.united(c).is_real_line());
  CHECK(a.intersected(c).is_empty());
  const IntervalUnion d = a.dilated(1.0);
  REQUIRE(d.size() == 1);
  CHECK(d.components()[0].lo == -2);
  CHECK(IntervalUnion::segment(0, 1).measure(Measure1D::uniform01()) == doctest::Approx(1.0));
  CHECK(IntervalUnion::lower_ray(0).measure(kGauss) == doctest::Approx(0.5));
}

TEST_CASE("minkowski content") {
  const Measure1D m = Measure1D::boltzmann(1.5);
  CHECK(minkowski_content(IntervalUnion::segment(-0.3, 1.2), m) == doctest::Approx(m.density(-0.3) + m.density(1.2)));
  CHECK(minkowski_content(IntervalUnion::lower_ray(0.0), kGauss) == doctest::Approx(kPhi0));
  CHECK(minkowski_content(IntervalUnion::real_line(), m) == 0.0);
  CHECK(minkowski_content(IntervalUnion::empty(), m) == 0.0);
  CHECK(minkowski_content(IntervalUnion({{0.4, 0.4, true, true}}), m) == doctest::Approx(2.0 * m.density(0.4)));
  SUBCASE("additive over separated components") {
    const IntervalUnion p = IntervalUnion::segment(-2, -1);
    const IntervalUnion q({{0, 0, true, true}});
    const IntervalUnion r = IntervalUnion::upper_ray(1.5);
    const IntervalUnion all = p.united(q).united(r);
    CHECK(minkowski_content(all, m) ==
          minkowski_content(p, m) + minkowski_content(q, m) + minkowski_content(r, m));
  }
}

TEST_CASE("indicator examples") {
  const SetDescriptor h = SetDescriptor::halfspace({1, 0, 0}, 0);
  const std::vector<double> x{-1, 5, 5};
  CHECK(indicator(h, x));
  CHECK_FALSE(indicator(SetDescriptor::complement(h), x));
  const OrthogonalMatrix g = haar_sample(3, 5);
  const SetDescriptor box = SetDescriptor::box_lower({0.3, -0.2, 1.0});
  const SetDescriptor rb = SetDescriptor::rotated(box, g.m);
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto p = random_point(3, 1, k);
    CHECK(rb.contains(p) == box.contains(g.m.apply_transpose(p)));
  }
  CHECK_THROWS_AS(SetDescriptor::halfspace({0, 0}, 1), DomainError);
}

TEST_CASE("halfspace normal is unit length") {
  const SetDescriptor h = SetDescriptor::halfspace({3, 4}, 5);
  const auto* hs = h.as<shape::Halfspace>();
  REQUIRE(hs);
  CHECK(std::fabs(std::hypot(hs->normal[0], hs->normal[1]) - 1.0) < 1e-12);
  CHECK(hs->offset == doctest::Approx(1.0));
}

TEST_CASE("fiber closed forms") {
  SUBCASE("halfspace") {
    const SetDescriptor h = SetDescriptor::halfspace({0.6, 0.8}, 0.5);
    const std::vector<double> x{0.0, 1.0};
    const IntervalUnion f = fiber(h, 0, x);
    REQUIRE(f.size() == 1);
    CHECK(f.components()[0].lo == -kInf);
    CHECK(f.components()[0].hi == doctest::Approx((0.5 - 0.8) / 0.6));
  }
  SUBCASE("box") {
    const SetDescriptor b = SetDescriptor::box_lower({1, 2, 3});
    CHECK(fiber(b, 1, std::vector<double>{0, 9, 0}) == IntervalUnion::lower_ray(2));
    CHECK(fiber(b, 1, std::vector<double>{1.5, 0, 0}).is_empty());
  }
  SUBCASE("ball") {
    const SetDescriptor b = SetDescriptor::l2_ball({0, 0, 0}, 2);
    const IntervalUnion f = fiber(b, 2, std::vector<double>{1, 1, 7});
    REQUIRE(f.size() == 1);
    CHECK(f.components()[0].lo == doctest::Approx(-std::sqrt(2.0)));
    CHECK(f.components()[0].hi == doctest::Approx(std::sqrt(2.0)));
    CHECK(fiber(b, 0, std::vector<double>{0, 2, 1}).is_empty());
  }
}

TEST_CASE("fibers agree with a membership scan") {
  const OrthogonalMatrix g = haar_sample(4, 17);
  const std::vector<SetDescriptor> sets{
      SetDescriptor::halfspace({1, -2, 0.5, 1}, 0.3),
      SetDescriptor::box_lower({0.2, -0.4, 1.1, 0.0}),
      SetDescriptor::l2_ball({0.1, 0, -0.3, 0.2}, 1.8),
      SetDescriptor::max_threshold(4, 0.7),
      SetDescriptor::sum_threshold(4, -0.5),
      rotate_set(SetDescriptor::halfspace({1, 1, 0, 0}, 0.1), g.m),
      SetDescriptor::rotated(SetDescriptor::box_lower({0.5, 0.5, 0.5, 0.5}), g.m),
      SetDescriptor::complement(SetDescriptor::l2_ball({0, 0, 0, 0}, 1.5)),
      SetDescriptor::cube_dilated_ball({0, 0.2, 0, 0}, 1.0, 0.3),
  };
  for (const auto& a : sets) {
    for (std::uint64_t k = 0; k < 3; ++k) {
      const auto x = random_point(4, 23, k, 0.6);
      check_fiber_by_scan(a, k % 4, x);
    }
  }
}

TEST_CASE("oracle fibers") {
  SUBCASE("decreasing oracle gives a lower ray, empty or the line") {
    const SetDescriptor a = SetDescriptor::monotone_oracle(
        3, [](std::span<const double> x) { return x[0] + 2 * x[1] + std::tanh(x[2]) <= 0.5; },
        Monotonicity::decreasing);
    for (std::uint64_t k = 0; k < 50; ++k) {
      const auto x = random_point(3, 41, k);
      for (std::size_t i = 0; i < 3; ++i) {
        const IntervalUnion f = fiber(a, i, x);
        const bool ok = f.is_empty() || f.is_real_line() || (f.size() == 1 && f.components()[0].lo == -kInf);
        CHECK(ok);
      }
    }
    const auto x = random_point(3, 41, 0);
    const IntervalUnion f = fiber(a, 0, x);
    REQUIRE(f.size() == 1);
    CHECK(std::fabs(f.components()[0].hi - (0.5 - 2 * x[1] - std::tanh(x[2]))) < 1e-9);
  }
  SUBCASE("generic oracle with two components") {
    const SetDescriptor a = SetDescriptor::generic_oracle(
        2, [](std::span<const double> x) { return std::fabs(x[0]) > 1.0 + 0.1 * x[1]; }, 2);
    const IntervalUnion f = fiber(a, 0, std::vector<double>{0, 0});
    REQUIRE(f.size() == 2);
    CHECK(std::fabs(f.components()[0].hi + 1.0) < 1e-6);
    CHECK(std::fabs(f.components()[1].lo - 1.0) < 1e-6);
  }
  SUBCASE("too many components raise") {
    const SetDescriptor a =
        SetDescriptor::generic_oracle(1, [](std::span<const double> x) { return std::sin(5 * x[0]) > 0; }, 2);
    CHECK_THROWS_AS(fiber(a, 0, std::vector<double>{0}), FiberResolutionError);
  }
  SUBCASE("non-monotone indicator is rejected") {
    CHECK_THROWS_AS(SetDescriptor::monotone_oracle(
                        2, [](std::span<const double> x) { return x[0] * x[0] < 1; }, Monotonicity::decreasing),
                    DomainError);
  }
}

TEST_CASE("enlarge") {
  const SetDescriptor eb = enlarge(SetDescriptor::box_lower({1, 2}), 0.5);
  REQUIRE(eb.as<shape::BoxLower>());
  CHECK(eb.as<shape::BoxLower>()->corner == std::vector<double>{1.5, 2.5});
  const SetDescriptor eh = enlarge(SetDescriptor::halfspace({1, 0}, 0.2), 0.3);
  REQUIRE(eh.as<shape::Halfspace>());
  CHECK(eh.as<shape::Halfspace>()->offset == doctest::Approx(0.5));
  const SetDescriptor eh2 = enlarge(SetDescriptor::halfspace({1, -1}, 0), 0.1);
  REQUIRE(eh2.as<shape::Halfspace>());
  CHECK(eh2.as<shape::Halfspace>()->offset == doctest::Approx(0.1 * std::sqrt(2.0)));
  const SetDescriptor em = enlarge(SetDescriptor::max_threshold(3, 1.0), 0.25);
  REQUIRE(em.as<shape::MaxThreshold>());
  CHECK(em.as<shape::MaxThreshold>()->level == doctest::Approx(0.75));
  const SetDescriptor es = enlarge(SetDescriptor::sum_threshold(4, 1.0), 0.25);
  REQUIRE(es.as<shape::SumThreshold>());
  CHECK(es.as<shape::SumThreshold>()->level == doctest::Approx(0.0));
  CHECK(enlarge(SetDescriptor::l2_ball({0, 0}, 1), 0.1).as<shape::CubeDilatedBall>());
  const SetDescriptor g =
      SetDescriptor::generic_oracle(1, [](std::span<const double> x) { return std::fabs(x[0]) > 1; }, 2);
  CHECK_THROWS_AS(enlarge(g, 0.1), CapabilityError);

  SUBCASE("cube dilation of a ball is the Minkowski sum") {
    const SetDescriptor e = enlarge(SetDescriptor::l2_ball({0, 0}, 1), 0.5);
    CHECK(e.contains(std::vector<double>{1.49, 0}));
    CHECK(e.contains(std::vector<double>{0.5 + 0.7, 0.5 + 0.7}));
    CHECK_FALSE(e.contains(std::vector<double>{0.5 + 0.72, 0.5 + 0.72}));
  }
  SUBCASE("measure does not decrease") {
    const ProductSpace sp = ProductSpace::homogeneous(kGauss, 3);
    for (const auto& a : {SetDescriptor::l2_ball({0, 0, 0}, 1.2), SetDescriptor::sum_threshold(3, 0.5),
                          SetDescriptor::halfspace({1, 2, -1}, 0.0)}) {
      const EnlargementResult r = enlargement_mc(a, 0.05, sp, McConfig(3, 20000));
      CHECK(r.measure_after >= r.measure_before - 3 * r.std_error);
      CHECK(r.measure_after >= r.measure_before);
    }
  }
}

TEST_CASE("measure_mc") {
  const ProductSpace sp2 = ProductSpace::homogeneous(kGauss, 2);
  const Estimate e = measure_mc(SetDescriptor::halfspace({1, 0}, 0), sp2, McConfig(1, 50000));
  CHECK(std::fabs(e.value - 0.5) <= 3 * e.std_error);
  for (double rho : {1.5, 3.0}) {
    const Measure1D m = Measure1D::boltzmann(rho);
    const std::size_t n = 6;
    const double a = m.quantile(std::pow(2.0, -1.0 / n));
    const Estimate b = measure_mc(SetDescriptor::box_lower(std::vector<double>(n, a)),
                                  ProductSpace::homogeneous(m, n), McConfig(2, 50000));
    CHECK(std::fabs(b.value - 0.5) <= 3 * b.std_error);
  }
  const Estimate empty = measure_mc(SetDescriptor::box_lower({-kInf, 0}), sp2, McConfig(1, 1000));
  CHECK(empty.value == 0.0);
  CHECK_THROWS_AS(measure_mc(SetDescriptor::box_lower({0, 0}), sp2, McConfig(1, 99)), DomainError);

  SUBCASE("ball measure matches chi-squared") {
    const boost::math::chi_squared_distribution<double> chi(3);
    const Estimate b = measure_mc(SetDescriptor::l2_ball({0, 0, 0}, 1.4), ProductSpace::homogeneous(kGauss, 3),
                                  McConfig(4, 50000));
    CHECK(std::fabs(b.value - boost::math::cdf(chi, 1.96)) <= 3 * b.std_error);
  }
}

TEST_CASE("measure is rotation invariant") {
  const ProductSpace sp = ProductSpace::homogeneous(kGauss, 3);
  const SetDescriptor a = SetDescriptor::box_lower({0.3, -0.1, 0.8});
  const McConfig cfg(9, 40000);
  const Estimate base = measure_mc(a, sp, cfg);
  for (std::uint64_t s : {1, 2, 3}) {
    const Estimate rot = measure_mc(SetDescriptor::rotated(a, haar_sample(3, s).m), sp, McConfig(100 + s, 40000));
    const double se = std::hypot(base.std_error, rot.std_error);
    CHECK(std::fabs(base.value - rot.value) <= 3 * se);
  }
}

TEST_CASE("jcal spotcheck") {
  CHECK(jcal_spotcheck(SetDescriptor::halfspace({1, 2, 3}, 0.2), 0.1, 500, 1).violations == 0);
  const JcalReport ball = jcal_spotcheck(SetDescriptor::l2_ball({0, 0, 0}, 1.5), 0.3, 500, 2);
  CHECK(ball.probes > 0);
  CHECK(ball.violations == 0);
  CHECK(jcal_spotcheck(SetDescriptor::box_lower({0.5, 0.5}), 0.05, 300, 3).violations == 0);

  // the corners of the square: eroding empties it
  const SetDescriptor corners = SetDescriptor::generic_oracle(
      2, [](std::span<const double> x) { return std::fabs(x[0]) == 1.0 && std::fabs(x[1]) == 1.0; }, 2);
  const std::vector<double> pts{1, 1, -1, 1, 1, -1, -1, -1};
  const JcalReport r = jcal_spotcheck(corners, 0.1, 4, 4, pts);
  CHECK(r.probes == 4);
  CHECK(r.violations > 0);
  CHECK(r.violation_fraction > 0.0);
}

TEST_CASE("descriptor metadata") {
  CHECK(SetDescriptor::box_lower({0, 0}).monotonicity() == Monotonicity::decreasing);
  CHECK(SetDescriptor::max_threshold(3, 0).monotonicity() == Monotonicity::increasing);
  CHECK(SetDescriptor::complement(SetDescriptor::box_lower({0, 0})).monotonicity() == Monotonicity::increasing);
  CHECK_FALSE(SetDescriptor::l2_ball({0, 0}, 1).monotonicity().has_value());
  CHECK(SetDescriptor::l2_ball({0, 0}, 1).is_convex());
  CHECK_FALSE(SetDescriptor::max_threshold(3, 0).is_convex());
  CHECK(SetDescriptor::halfspace({1, 1}, 0).dim() == 2);
}
