#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "geoinf/influence.hpp"
#include "geoinf/kernels.hpp"
#include "geoinf/rng.hpp"

using namespace geoinf;
using simd::Isa;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed, double scale = 4.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = scale * (rng::uniform(seed, i, 3) - 0.5);
  return v;
}

double abs_sum(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] * b[i]);
  return s;
}

struct Restore {
  Isa isa = simd::active().isa;
  ~Restore() { simd::select(isa); }
};

}  // namespace

TEST_CASE("scalar table is always there") {
  const auto& s = simd::scalar_kernels();
  CHECK(s.isa == Isa::scalar);
  CHECK(simd::isa_name(Isa::scalar) == "scalar");
  CHECK(simd::isa_name(Isa::avx2) == "avx2");
  const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
  CHECK(s.dot(a.data(), b.data(), 3) == 12.0);
  CHECK(s.sum(a.data(), 3) == 6.0);
  CHECK(s.squared_distance(a.data(), b.data(), 3) == 9.0 + 49.0 + 9.0);
  CHECK(s.count_greater(a.data(), b.data(), 3) == 1);
  const simd::Max2 m = s.max2(b.data(), 3);
  CHECK(m.first == 6.0);
  CHECK(m.arg_first == 2);
  CHECK(m.second == 4.0);
  CHECK(s.max2(a.data(), 1).second == -std::numeric_limits<double>::infinity());
}

TEST_CASE("selection") {
  Restore keep;
  CHECK(simd::select(Isa::scalar));
  CHECK(simd::active().isa == Isa::scalar);
  if (simd::avx2_kernels() != nullptr) {
    CHECK(simd::detected_isa() == Isa::avx2);
    CHECK(simd::select(Isa::avx2));
    CHECK(simd::active().isa == Isa::avx2);
  } else {
    CHECK(simd::detected_isa() == Isa::scalar);
    CHECK_FALSE(simd::select(Isa::avx2));
    CHECK(simd::active().isa == Isa::scalar);
  }
}

TEST_CASE("avx2 matches scalar") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (v == nullptr) {
    MESSAGE("no AVX2 on this machine; equivalence not exercised");
    return;
  }
  const auto& s = simd::scalar_kernels();
  for (std::size_t n = 0; n <= 67; ++n) {
    CAPTURE(n);
    const auto a = noise(n, 100 + n), b = noise(n, 200 + n);
    const double tol = 1e-14 * (1.0 + abs_sum(a, b));
    CHECK(std::fabs(v->dot(a.data(), b.data(), n) - s.dot(a.data(), b.data(), n)) <= tol);
    CHECK(std::fabs(v->sum(a.data(), n) - s.sum(a.data(), n)) <= 1e-14 * (1.0 + 4.0 * n));
    CHECK(std::fabs(v->squared_distance(a.data(), b.data(), n) - s.squared_distance(a.data(), b.data(), n)) <=
          1e-14 * (1.0 + 16.0 * n));
    CHECK(v->count_greater(a.data(), b.data(), n) == s.count_greater(a.data(), b.data(), n));

    if (n > 0) {
      const simd::Max2 mv = v->max2(a.data(), n), ms = s.max2(a.data(), n);
      CHECK(mv.first == ms.first);
      CHECK(mv.arg_first == ms.arg_first);
      CHECK(mv.second == ms.second);
    }

    std::vector<double> u = noise(n, 300 + n);
    for (std::size_t i = 0; i < n; i += 5) u[i] = 0.0;
    std::vector<double> ov(n), os(n);
    v->affine_thresholds(a.data(), u.data(), 0.7, ov.data(), n);
    s.affine_thresholds(a.data(), u.data(), 0.7, os.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i] != 0.0) CHECK(ov[i] == doctest::Approx(os[i]).epsilon(1e-15));
    }
  }
  SUBCASE("ties go to the lowest index") {
    for (std::size_t n : {3, 4, 5, 9, 17}) {
      std::vector<double> x(n, 1.0);
      x[n - 1] = 3.0;
      x[n / 2] = 3.0;
      const simd::Max2 mv = v->max2(x.data(), n), ms = s.max2(x.data(), n);
      CHECK(mv.arg_first == n / 2);
      CHECK(ms.arg_first == n / 2);
      CHECK(mv.second == 3.0);
      CHECK(ms.second == 3.0);
    }
  }
}

TEST_CASE("influence estimates agree across kernel sets") {
  if (simd::avx2_kernels() == nullptr) return;
  Restore keep;
  const ProductSpace space = ProductSpace::homogeneous(Measure1D::gaussian(), 9);
  const SetDescriptor sets[] = {SetDescriptor::halfspace({1, -2, 0.5, 0, 3, 1, 1, -1, 2}, 0.4),
                                SetDescriptor::max_threshold(9, 1.2),
                                SetDescriptor::l2_ball(std::vector<double>(9, 0.1), 3.0)};
  for (const SetDescriptor& a : sets) {
    simd::select(Isa::scalar);
    const InfluenceProfile ps = influence_profile(a, space, McConfig(17, 5000));
    simd::select(Isa::avx2);
    const InfluenceProfile pv = influence_profile(a, space, McConfig(17, 5000));
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(pv.coords[i].value == doctest::Approx(ps.coords[i].value).epsilon(1e-9));
    }
  }
}
