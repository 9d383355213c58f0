#pragma once

#include <vector>

#include "csk/law.hpp"
#include "csk/measure.hpp"
#include "csk/quadrature.hpp"

namespace csk {

struct ThetaInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Kernel parameter range: (0, theta_plus) when A(nu) >= 0, and the extra
// branch (-inf, 1/A) when A(nu) < 0.
struct ThetaDomain {
  std::vector<ThetaInterval> intervals;
  bool contains(double theta) const;
};

ThetaDomain theta_domain(const Law& law);

// G(z) = int (z-x)^-1 nu(dx), real z above the support. Closed form when the
// catalog carries one, quadrature otherwise.
double cauchy_transform(const Law& law, double z,
                        const QuadratureConfig& cfg = {});

// Always the quadrature route; the oracle the closed forms are checked
// against. allow_at_A permits z = A itself (integrable for sqrt-edge
// densities; divergence surfaces as non-convergence).
double cauchy_transform_quadrature(const Law& law, double z,
                                   const QuadratureConfig& cfg = {},
                                   bool allow_at_A = false);

// lim_{b -> B+} G(b) by sampling b = B + 10^-k, k = 2..8: +inf when the
// samples keep growing, otherwise a {1, sqrt(h), h} extrapolation of the
// three smallest h.
double cauchy_transform_at_B(const Law& law, const QuadratureConfig& cfg = {});

// M(theta) = int (1 - theta*x)^-1 nu(dx); M(0) = 1 by convention. Computed
// by quadrature (two-sided laws additionally accept theta in (theta_lower,0)).
double m_transform(const Law& law, double theta,
                   const QuadratureConfig& cfg = {});

// M'(theta) = int x (1 - theta*x)^-2 nu(dx), direct quadrature.
double m_transform_derivative(const Law& law, double theta,
                              const QuadratureConfig& cfg = {});

// k(theta) = (M(theta) - 1) / (theta M(theta)), evaluated cancellation-free
// as the mean of the tilted member: int x/(1-theta x) dnu / M(theta).
double mean_function(const Law& law, double theta,
                     const QuadratureConfig& cfg = {});

// lim_{theta->0+} k(theta): the mean of nu. Returns -inf when the samples
// diverge (k at theta = 10^-j, j = 2..8, dropping without stabilizing).
double mean_limit_at_zero(const Law& law, const QuadratureConfig& cfg = {});

// lim_{theta->base+} k(theta) by linear extrapolation of samples at
// base + 10^-j. Used for the lower end of a two-sided kernel range.
double mean_limit_at(const Law& law, double theta_base,
                     const QuadratureConfig& cfg = {});

// Solves f(h) = c0 + c1 sqrt(h) + c2 h through three samples and returns c0.
double extrapolate_sqrt_fit(const double h[3], const double g[3]);

}  // namespace csk
