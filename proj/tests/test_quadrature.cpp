#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"

#include "csk/quadrature.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using csk::EndpointKind;
using csk::IntegralResult;
using csk::QuadratureConfig;

}  // namespace

TEST_CASE("smooth finite integrals") {
  QuadratureConfig cfg;
  auto r = csk::integrate_interval([](double x) { return x * x; }, 0.0, 1.0,
                                   EndpointKind::none, EndpointKind::none,
                                   cfg);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  r = csk::integrate_interval([](double x) { return std::exp(x); }, -1.0, 2.0,
                              EndpointKind::none, EndpointKind::none, cfg);
  CHECK(r.value ==
        doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("inverse-sqrt endpoint substitution") {
  QuadratureConfig cfg;
  auto r = csk::integrate_interval(
      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
      EndpointKind::inverse_sqrt, EndpointKind::none, cfg);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

  // Both endpoints: semicircle normalizer over (-2,2).
  r = csk::integrate_interval(
      [](double x) { return std::sqrt(4.0 - x * x); }, -2.0, 2.0,
      EndpointKind::inverse_sqrt, EndpointKind::inverse_sqrt, cfg);
  CHECK(r.value == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("semi-infinite rational map with half-power tail") {
  QuadratureConfig cfg;
  // int_{-inf}^{-1} (-x)^{-3/2} dx = 2.
  auto panels = csk::make_panels(
      [](double x) { return std::pow(-x, -1.5); }, -kInf, -1.0,
      EndpointKind::inverse_sqrt, EndpointKind::none);
  auto r = csk::integrate_panels(panels, cfg);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));

  // Faster-decaying integrand through the same map.
  panels = csk::make_panels([](double x) { return std::exp(x); }, -kInf, 0.0,
                            EndpointKind::inverse_sqrt, EndpointKind::none);
  r = csk::integrate_panels(panels, cfg);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("subdivision budget reports non-convergence") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 1;
  cfg.rel_tol = 1e-15;
  cfg.abs_tol = 1e-300;
  auto r = csk::integrate_interval(
      [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0,
      EndpointKind::none, EndpointKind::none, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.error_estimate > 0.0);
}
