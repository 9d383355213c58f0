#include "csk/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csk/errors.hpp"

namespace csk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool theta_admissible(const Law& law, double theta) {
  if (theta == 0.0) return true;
  if (theta_domain(law).contains(theta)) return true;
  if (law.two_sided() && theta > law.theta_lower() && theta < 0.0) return true;
  return false;
}

}  // namespace

bool ThetaDomain::contains(double theta) const {
  for (const ThetaInterval& iv : intervals) {
    if (theta > iv.lo && theta < iv.hi) return true;
  }
  return false;
}

ThetaDomain theta_domain(const Law& law) {
  const SupportBounds b = support_bounds(law);
  ThetaDomain dom;
  if (b.A >= 0.0) {
    dom.intervals.push_back({0.0, b.theta_plus});
  } else {
    dom.intervals.push_back({-kInf, 1.0 / b.A});
    dom.intervals.push_back({0.0, kInf});
  }
  return dom;
}

double cauchy_transform_quadrature(const Law& law, double z,
                                   const QuadratureConfig& cfg,
                                   bool allow_at_A) {
  const double A = law.measure().sup_support();
  if (!(z > A) && !(allow_at_A && z == A))
    throw DomainError("cauchy transform needs z above the support");
  // z - x = (z - upper) + s_hi keeps full precision inside the boundary
  // layer when z sits within rounding distance of the support edge.
  const double upper = law.measure().support().upper;
  const double c0 = z - upper;
  return integrate_edge_aware(
      [z, c0](double x, double, double s_hi) {
        const double d = std::isinf(s_hi) ? z - x : c0 + s_hi;
        return 1.0 / d;
      },
      law.measure(), cfg);
}

double cauchy_transform(const Law& law, double z, const QuadratureConfig& cfg) {
  const double A = law.measure().sup_support();
  if (!(z > A))
    throw DomainError("cauchy transform needs z above the support");
  if (const ClosedForms* cf = law.closed_forms();
      cf && cf->cauchy_transform) {
    return cf->cauchy_transform(z);
  }
  return cauchy_transform_quadrature(law, z, cfg);
}

double cauchy_transform_at_B(const Law& law, const QuadratureConfig& cfg) {
  const SupportBounds b = support_bounds(law);
  double g[7];
  double h[7];
  for (int k = 2; k <= 8; ++k) {
    h[k - 2] = std::pow(10.0, -k);
    g[k - 2] = cauchy_transform_quadrature(law, b.B + h[k - 2], cfg);
  }
  const double g6 = g[4], g8 = g[6];
  if (g8 > 1e12 || g8 >= 5.0 * g6) return kInf;
  const double hs[3] = {h[4], h[5], h[6]};
  const double gs[3] = {g[4], g[5], g[6]};
  return extrapolate_sqrt_fit(hs, gs);
}

double extrapolate_sqrt_fit(const double h[3], const double g[3]) {
  // 3x3 solve for {1, sqrt(h), h} coefficients; returns the constant term.
  double a[3][4];
  for (int i = 0; i < 3; ++i) {
    a[i][0] = 1.0;
    a[i][1] = std::sqrt(h[i]);
    a[i][2] = h[i];
    a[i][3] = g[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[piv], a[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col || a[col][col] == 0.0) continue;
      const double factor = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return a[0][3] / a[0][0];
}

namespace {

// 1 - theta*x = (1 - theta*upper) + theta*s_hi: stable against the kernel
// pole approaching the support edge (theta near 1/A or theta_plus).
EdgeAwareFn kernel_denominator(const Law& law, double theta) {
  const double upper =
      law.measure().has_density() ? law.measure().support().upper : 0.0;
  const double c0 = 1.0 - theta * upper;
  return [theta, c0](double x, double, double s_hi) {
    return std::isinf(s_hi) ? 1.0 - theta * x : c0 + theta * s_hi;
  };
}

}  // namespace

double m_transform(const Law& law, double theta, const QuadratureConfig& cfg) {
  if (theta == 0.0) return 1.0;
  if (!theta_admissible(law, theta))
    throw DomainError("theta outside the kernel parameter range");
  const EdgeAwareFn denom = kernel_denominator(law, theta);
  return integrate_edge_aware(
      [&denom](double x, double s_lo, double s_hi) {
        return 1.0 / denom(x, s_lo, s_hi);
      },
      law.measure(), cfg);
}

double m_transform_derivative(const Law& law, double theta,
                              const QuadratureConfig& cfg) {
  if (!theta_admissible(law, theta))
    throw DomainError("theta outside the kernel parameter range");
  const EdgeAwareFn denom = kernel_denominator(law, theta);
  return integrate_edge_aware(
      [&denom](double x, double s_lo, double s_hi) {
        const double d = denom(x, s_lo, s_hi);
        return x / (d * d);
      },
      law.measure(), cfg);
}

double mean_function(const Law& law, double theta,
                     const QuadratureConfig& cfg) {
  if (theta == 0.0)
    throw DomainError("mean function is defined for theta != 0");
  if (!theta_admissible(law, theta))
    throw DomainError("theta outside the kernel parameter range");
  const EdgeAwareFn denom = kernel_denominator(law, theta);
  const double m = integrate_edge_aware(
      [&denom](double x, double s_lo, double s_hi) {
        return 1.0 / denom(x, s_lo, s_hi);
      },
      law.measure(), cfg);
  const double i1 = integrate_edge_aware(
      [&denom](double x, double s_lo, double s_hi) {
        return x / denom(x, s_lo, s_hi);
      },
      law.measure(), cfg);
  return i1 / m;
}

double mean_limit_at(const Law& law, double theta_base,
                     const QuadratureConfig& cfg) {
  double k[7];
  double h[7];
  for (int j = 2; j <= 8; ++j) {
    h[j - 2] = std::pow(10.0, -j);
    k[j - 2] = mean_function(law, theta_base + h[j - 2], cfg);
  }
  if (theta_base == 0.0) {
    const double k6 = k[4], k7 = k[5], k8 = k[6];
    const bool growing = std::abs(k7) >= 1.8 * std::abs(k6) &&
                         std::abs(k8) >= 1.8 * std::abs(k7);
    if (k8 < -100.0 && growing) return -kInf;
  }
  // Linear extrapolation to h = 0 from the two smallest samples.
  const double h7 = h[5], h8 = h[6];
  return (k[6] * h7 - k[5] * h8) / (h7 - h8);
}

double mean_limit_at_zero(const Law& law, const QuadratureConfig& cfg) {
  return mean_limit_at(law, 0.0, cfg);
}

}  // namespace csk
