#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "csk/quadrature.hpp"

namespace csk {

struct Atom {
  double location = 0.0;
  double weight = 0.0;  // >= 0
};

// Integrand/density evaluated at x with the distances to the a.c. support
// endpoints passed alongside (s_lo = x - lower, s_hi = upper - x). On
// endpoint-substituted quadrature panels the relevant distance is exact
// (t^2 from the substitution), which keeps 1/sqrt edge factors and
// near-edge kernel poles at full relative precision; elsewhere the naive
// differences are passed.
using EdgeAwareFn = std::function<double(double x, double s_lo, double s_hi)>;

// Open interval carrying the absolutely continuous part, with per-endpoint
// singularity tags so the quadrature engine can pick substitutions.
struct AcSupport {
  double lower = 0.0;  // may be -infinity
  double upper = 0.0;
  EndpointKind lower_kind = EndpointKind::none;
  EndpointKind upper_kind = EndpointKind::none;
};

// A nonnegative measure on R: density on an interval plus finitely many
// atoms. Immutable after construction; all accessors are const.
class Measure {
 public:
  Measure() = default;

  static Measure absolutely_continuous(EdgeAwareFn density, AcSupport support);
  static Measure atomic(std::vector<Atom> atoms);
  static Measure mixed(EdgeAwareFn density, AcSupport support,
                       std::vector<Atom> atoms);

  bool has_density() const { return static_cast<bool>(density_); }
  const AcSupport& support() const { return support_; }
  std::span<const Atom> atoms() const { return atoms_; }
  double total_mass_hint() const { return mass_hint_; }

  // Density value at an interior point of the a.c. support; DomainError at or
  // outside the endpoints, or when the measure is purely atomic.
  double density(double x) const;

  // As density(x) but without the domain check; 0 outside the support. Used
  // by integrands that sweep the full support.
  double density_unchecked(double x) const;

  // Edge-aware evaluation with caller-supplied exact distances.
  double density_at(double x, double s_lo, double s_hi) const;
  const EdgeAwareFn& density_fn() const { return density_; }

  double sup_support() const;  // sup of a.c. support and atom locations
  double inf_support() const;  // may be -infinity

 private:
  EdgeAwareFn density_;
  AcSupport support_{};
  std::vector<Atom> atoms_;
  double mass_hint_ = 1.0;
};

// Integral of f against the measure: adaptive quadrature over the a.c. part
// (with endpoint substitutions per the tags) plus the atom sum. Throws
// NumericError carrying the achieved residual on non-convergence.
double integrate(const std::function<double(double)>& f, const Measure& mu,
                 const QuadratureConfig& cfg = {});

IntegralResult integrate_result(const std::function<double(double)>& f,
                                const Measure& mu,
                                const QuadratureConfig& cfg = {});

// Edge-aware variants for integrands with near-edge kernel poles (the
// transform kernels sampled at boundary-layer parameters).
double integrate_edge_aware(const EdgeAwareFn& f, const Measure& mu,
                            const QuadratureConfig& cfg = {});

IntegralResult integrate_result_edge_aware(const EdgeAwareFn& f,
                                           const Measure& mu,
                                           const QuadratureConfig& cfg = {});

}  // namespace csk
