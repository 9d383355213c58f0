#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "csk/errors.hpp"
#include "csk/iterate.hpp"
#include "csk/quadrature.hpp"

using csk::build_family;
using csk::CskFamily;
using csk::iterate_family;
using csk::IteratedFamily;
using csk::Law;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("iterated transforms for the semicircle") {
  const CskFamily fam = build_family(Law::from_spec("semicircle"));
  const IteratedFamily it = iterate_family(fam, 0.5);
  CHECK(it.theta1() == doctest::Approx(0.4).epsilon(1e-10));

  // theta = theta1 exercises the derivative branch; the direct route is the
  // quadrature of (1 - theta x)^-1 against Q_{m1}.
  const csk::Measure q = it.member_measure();
  for (double theta : {0.2, 0.4, 0.45}) {
    CAPTURE(theta);
    const double direct = csk::integrate(
        [theta](double x) { return 1.0 / (1.0 - theta * x); }, q);
    CHECK(it.m_transform(theta) == doctest::Approx(direct).epsilon(1e-9));
  }
  CHECK(it.m_transform(0.4) == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("iterated transforms for bernoulli") {
  const CskFamily fam = build_family(Law::from_spec("bernoulli"));
  const IteratedFamily it = iterate_family(fam, 0.5);
  CHECK(it.theta1() == doctest::Approx(0.5).epsilon(1e-10));
  // Exact two-atom computation: M1(0.25) = 0.75/0.75 + 0.25/1.25 = 1.2.
  CHECK(it.m_transform(0.25) == doctest::Approx(1.2).epsilon(1e-9));
}

TEST_CASE("mean map") {
  const CskFamily sc = build_family(Law::from_spec("semicircle"));
  const IteratedFamily it = iterate_family(sc, 0.5);
  CHECK(it.mean_map(0.3) == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(it.mean_map(0.5) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(it.mean_map_inverse(0.8) == doctest::Approx(0.3).epsilon(1e-9));

  const CskFamily abel = build_family(Law::from_spec("free_abel"));
  const IteratedFamily it2 = iterate_family(abel, -1.0);
  CHECK(it2.mean_map(-2.0) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("iterated domains match the closed forms") {
  auto domain = [](const char* spec, double m1) {
    const IteratedFamily it =
        iterate_family(build_family(Law::from_spec(spec)), m1);
    return std::pair<double, double>(it.mbar0(), it.mbar_plus());
  };
  auto [a1, b1] = domain("semicircle", 0.5);
  CHECK(a1 == doctest::Approx(0.5));
  CHECK(b1 == doctest::Approx(1.5).epsilon(1e-8));

  auto [a2, b2] = domain("mp:a=0.5", 0.5);
  CHECK(a2 == doctest::Approx(0.5));
  CHECK(b2 == doctest::Approx(1.75).epsilon(1e-8));

  auto [a3, b3] = domain("free_ressel", -3.0);
  CHECK(a3 == doctest::Approx(-3.0));
  CHECK(b3 == doctest::Approx(-1.5).epsilon(1e-8));

  auto [a4, b4] = domain("arcsine", -1.0);
  CHECK(a4 == doctest::Approx(-1.0));
  CHECK(b4 == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  auto [a5, b5] = domain("isc:p=1", -2.0);
  CHECK(a5 == doctest::Approx(-2.0));
  CHECK(b5 == doctest::Approx(-2.0 / 3.0).epsilon(1e-8));

  auto [a6, b6] = domain("free_abel", -1.0);
  CHECK(a6 == doctest::Approx(-1.0));
  CHECK(b6 == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("iterated variance reference values") {
  const IteratedFamily sc =
      iterate_family(build_family(Law::from_spec("semicircle")), 0.5);
  CHECK(sc.variance(0.8) == doctest::Approx(0.85).epsilon(1e-9));

  const IteratedFamily abel =
      iterate_family(build_family(Law::from_spec("free_abel")), -1.0);
  CHECK(abel.variance(-0.5) == doctest::Approx(2.25).epsilon(1e-9));

  const IteratedFamily isc =
      iterate_family(build_family(Law::from_spec("isc:p=1")), -2.0);
  CHECK(isc.variance(-1.5) == doctest::Approx(15.75).epsilon(1e-9));
}

TEST_CASE("psi preservation") {
  const IteratedFamily it =
      iterate_family(build_family(Law::from_spec("semicircle")), 0.5);
  const double m = 0.3;
  const double mbar = it.mean_map(m);
  CHECK(it.psi1(mbar) ==
        doctest::Approx(it.base().psi(m)).epsilon(1e-9));
  CHECK(it.base().psi(m) == doctest::Approx(0.3 / 1.09).epsilon(1e-9));
}

TEST_CASE("closed-form quadratic and cubic iterates") {
  const auto quad = csk::quadratic_closed_forms(0.0, 0.0, 0.5);
  CHECK(quad.v1(0.8) == doctest::Approx(0.85));
  CHECK(quad.m_of_mbar(0.8) == doctest::Approx(0.3));

  const auto mp = csk::quadratic_closed_forms(0.5, 0.0, 0.5);
  // v1 = (1 + a mbar)(1 + m1 (a + m1 - mbar)) / (1 + a m1).
  CHECK(mp.v1(1.0) ==
        doctest::Approx(1.5 * (1.0 + 0.5 * (0.5 + 0.5 - 1.0)) / 1.25));

  const auto abel = csk::cubic_closed_forms(1.0, -1.0, 0.0, -1.0);
  CHECK(abel.v1(-0.5) == doctest::Approx(2.25));
  CHECK(abel.m_of_mbar(-0.5) == doctest::Approx(-2.0));

  const auto arc = csk::cubic_closed_forms(1.0, 0.0, 1.0, -1.0);
  // (1 + mbar^2)(m1^2 + m1 + 1 - mbar)/(mbar - m1) at mbar = -0.5.
  CHECK(arc.v1(-0.5) == doctest::Approx(1.25 * 1.5 / 0.5));

  CHECK_THROWS_AS(csk::cubic_closed_forms(0.0, 1.0, 0.0, -1.0),
                  csk::DomainError);
  CHECK_THROWS_AS(csk::cubic_closed_forms(-1.0, 1.0, 0.0, -1.0),
                  csk::DomainError);
}

TEST_CASE("askey-wilson product formula") {
  CHECK(csk::aw_integral(0.0, 0.0, 0.0, 0.5) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(csk::aw_integral(0.0, 0.0, 0.3, 0.5) ==
        doctest::Approx(2.0 * kPi / 0.85).epsilon(1e-14));
  CHECK_THROWS_AS(csk::aw_integral(1.0, 0.0, 0.0, 0.0), csk::DomainError);
  CHECK_THROWS_AS(csk::aw_integral(0.0, -1.2, 0.0, 0.0), csk::DomainError);

  // Against the quadrature oracle for a generic tuple.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int i = 0; i < 3; ++i) {
    const double a1 = u(rng), a2 = u(rng), a3 = u(rng), a4 = u(rng);
    CAPTURE(a1);
    CAPTURE(a2);
    CAPTURE(a3);
    CAPTURE(a4);
    auto f = [&](double x) {
      double prod = std::sqrt(4.0 - x * x);
      for (double a : {a1, a2, a3, a4}) prod /= 1.0 + a * a - a * x;
      return prod;
    };
    csk::QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    const auto r = csk::integrate_interval(
        f, -2.0, 2.0, csk::EndpointKind::inverse_sqrt,
        csk::EndpointKind::inverse_sqrt, cfg);
    REQUIRE(r.converged);
    CHECK(csk::aw_integral(a1, a2, a3, a4) ==
          doctest::Approx(r.value).epsilon(1e-10));
  }
}

TEST_CASE("twice-iterated semicircle closed form") {
  // v2 is quadratic in m with the stated coefficients.
  CHECK(csk::semicircle_v2_closed(0.3, 0.5, 1.0) ==
        doctest::Approx((1.0 - 0.7 * 0.3) * ((-0.2) * 0.8 + 1.0) / 0.94));
}

TEST_CASE("iterated m-transform normalizes at theta -> 0") {
  for (const char* spec : {"semicircle", "free_ressel"}) {
    CAPTURE(spec);
    const CskFamily fam = build_family(Law::from_spec(spec));
    const IteratedFamily it =
        iterate_family(fam, 0.5 * (fam.m_plus() +
                                   std::max(fam.m_plus() - 2.0, fam.m0())));
    CHECK(it.m_transform(1e-8) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("iterate rejects m1 outside the base domain") {
  const CskFamily fam = build_family(Law::from_spec("semicircle"));
  CHECK_THROWS_AS(iterate_family(fam, 1.2), csk::DomainError);
  CHECK_THROWS_AS(iterate_family(fam, -0.3), csk::DomainError);
}
