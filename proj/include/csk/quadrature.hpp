#pragma once

#include <functional>
#include <vector>

namespace csk {

// Controls for the adaptive Gauss-Kronrod engine. infinite tails are mapped
// to (0,1] by the rational map x = c - (1-u)/u before subdivision.
struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_subdivisions = 2000;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

// One already-smooth finite panel; integrand includes any substitution
// jacobian. Endpoints are never evaluated (Gauss-Kronrod nodes are interior).
struct Panel {
  std::function<double(double)> f;
  double lo = 0.0;
  double hi = 0.0;
};

// Adaptive 15/7 Gauss-Kronrod over a set of initial panels, bisecting the
// worst-error panel until sum of per-panel estimates meets
// max(abs_tol, rel_tol * |I|) or the subdivision budget runs out.
IntegralResult integrate_panels(std::vector<Panel> panels,
                                const QuadratureConfig& cfg);

enum class EndpointKind {
  none,
  inverse_sqrt,  // half-integer power behavior; engine substitutes x = a + t^2
};

// Integral of f over a finite interval [a,b] with optional endpoint
// substitutions. Used directly by harness checks with explicit integrands.
IntegralResult integrate_interval(const std::function<double(double)>& f,
                                  double a, double b, EndpointKind lower_kind,
                                  EndpointKind upper_kind,
                                  const QuadratureConfig& cfg);

// Builds the mapped panels for f over (lo, hi]; lo may be -infinity, in which
// case the tail beyond hi - max(2,|hi|) goes through the rational map (with a
// t^2 refinement when the lower tag marks a half-power tail). f receives
// (x, s_lo, s_hi) with the substituted endpoint distance exact.
std::vector<Panel> make_panels(
    const std::function<double(double, double, double)>& f, double lo,
    double hi, EndpointKind lower_kind, EndpointKind upper_kind);

std::vector<Panel> make_panels(const std::function<double(double)>& f,
                               double lo, double hi, EndpointKind lower_kind,
                               EndpointKind upper_kind);

}  // namespace csk
