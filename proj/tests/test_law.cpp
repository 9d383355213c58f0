#include <cmath>
#include <numbers>

#include "doctest.h"

#include "csk/errors.hpp"
#include "csk/law.hpp"
#include "csk/measure.hpp"

using csk::Law;
using csk::LawName;
using csk::Measure;

TEST_CASE("law spec grammar") {
  CHECK(Law::from_spec("semicircle").name() == LawName::semicircle);
  CHECK(Law::from_spec("mp:a=0.5").name() == LawName::marchenko_pastur);
  CHECK(Law::from_spec("marchenko_pastur:a=-0.25").name() ==
        LawName::marchenko_pastur);
  CHECK(Law::from_spec("arcsine").name() == LawName::free_strict_arcsine);
  CHECK(Law::from_spec("free_strict_arcsine").name() ==
        LawName::free_strict_arcsine);
  CHECK(Law::from_spec("isc:p=2").parameters().at("p") == 2.0);
  CHECK(Law::from_spec("isc").parameters().at("p") == 1.0);
  CHECK(Law::from_spec("inverse_semicircle:p=0.5").name() ==
        LawName::inverse_semicircle);
  CHECK(Law::from_spec("bernoulli").name() == LawName::bernoulli_symmetric);

  CHECK_THROWS_AS(Law::from_spec("wigner"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("mp"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("mp:a=1"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("mp:a=-1"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("mp:a=0.5,a=0.6"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("mp:a"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("mp:a=zzz"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("mp:a=0.5x"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("semicircle:a=1"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("isc:p=0"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec("isc:p=-1"), csk::UsageError);
  CHECK_THROWS_AS(Law::from_spec(""), csk::UsageError);
}

TEST_CASE("catalog densities at reference points") {
  const Law sc = Law::from_spec("semicircle");
  CHECK(csk::evaluate_density(sc.measure(), 0.0) ==
        doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));

  const Law abel = Law::from_spec("free_abel");
  CHECK(csk::evaluate_density(abel.measure(), -1.0) ==
        doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-14));

  const Law bern = Law::from_spec("bernoulli");
  CHECK_THROWS_AS(csk::evaluate_density(bern.measure(), 0.3),
                  csk::DomainError);

  // Endpoints excluded.
  CHECK_THROWS_AS(csk::evaluate_density(sc.measure(), 2.0), csk::DomainError);
  CHECK_THROWS_AS(csk::evaluate_density(sc.measure(), -2.5),
                  csk::DomainError);
}

TEST_CASE("marchenko-pastur atom regimes") {
  const Law sub = Law::from_spec("mp:a=0.5");
  CHECK(sub.measure().atoms().empty());

  const Law super = Law::from_spec("mp:a=-2");
  REQUIRE(super.measure().atoms().size() == 1);
  CHECK(super.measure().atoms()[0].location == doctest::Approx(0.5));
  CHECK(super.measure().atoms()[0].weight == doctest::Approx(0.75));

  const Law super_pos = Law::from_spec("mp:a=2");
  REQUIRE(super_pos.measure().atoms().size() == 1);
  CHECK(super_pos.measure().atoms()[0].location == doctest::Approx(-0.5));
  CHECK(super_pos.measure().atoms()[0].weight == doctest::Approx(0.75));
}

TEST_CASE("support bounds") {
  auto check = [](const char* spec, double A, double B, double theta_plus) {
    const csk::SupportBounds b = csk::support_bounds(Law::from_spec(spec));
    CHECK(b.A == doctest::Approx(A).epsilon(1e-14));
    CHECK(b.B == doctest::Approx(B).epsilon(1e-14));
    if (std::isinf(theta_plus))
      CHECK(std::isinf(b.theta_plus));
    else
      CHECK(b.theta_plus == doctest::Approx(theta_plus).epsilon(1e-14));
  };
  const double inf = std::numeric_limits<double>::infinity();
  check("semicircle", 2.0, 2.0, 0.5);
  check("isc:p=1", -0.25, 0.0, inf);
  check("arcsine", 0.75, 0.75, 4.0 / 3.0);
  check("free_ressel", -1.0, 0.0, inf);
  check("free_abel", 0.0, 0.0, inf);
  check("mp:a=-2", 0.5, 0.5, 2.0);
  check("mp:a=2", 4.0, 4.0, 0.25);
  check("bernoulli", 1.0, 1.0, 1.0);
}

TEST_CASE("catalog masses are probability") {
  for (const char* spec : {"semicircle", "mp:a=0.5", "mp:a=2", "mp:a=-2",
                           "free_abel", "free_ressel", "arcsine", "isc:p=1",
                           "isc:p=2", "bernoulli"}) {
    CAPTURE(spec);
    const Law law = Law::from_spec(spec);
    const double mass =
        csk::integrate([](double) { return 1.0; }, law.measure());
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("atom invariants") {
  CHECK_THROWS_AS(Measure::atomic({{1.0, -0.5}}), csk::DomainError);
  CHECK_THROWS_AS(Measure::atomic({{1.0, 0.5}, {1.0, 0.5}}),
                  csk::DomainError);
}
