#include "csk/family.hpp"

#include <cmath>
#include <limits>

#include "csk/errors.hpp"
#include "csk/transforms.hpp"

namespace csk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tilt_kernel(double m, double r, double x) {
  // Q_m kernel V/(V + m(m-x)) written as r/(r + m - x) with r = V(m)/m so it
  // degenerates gracefully at m = 0 (r = 0 or r = inf).
  if (std::isinf(r)) return 1.0;
  return r / (r + m - x);
}

}  // namespace

void CskFamily::require_in_domain(double m) const {
  if (!(m > m0_ && m < m_plus_))
    throw DomainError("m outside the domain of means");
}

double CskFamily::k_of_theta(double theta) const {
  // k extends continuously to theta = 0 with the mean of nu (bisection over
  // a two-sided range can land on 0 exactly).
  if (theta == 0.0) return mean_;
  return mean_function(law_, theta, cfg_);
}

double CskFamily::m_transform_at(double theta) const {
  return m_transform(law_, theta, cfg_);
}

double CskFamily::psi(double m) const {
  require_in_domain(m);
  {
    std::lock_guard<std::mutex> lock(psi_cache_->mutex);
    auto it = psi_cache_->values.find(m);
    if (it != psi_cache_->values.end()) return it->second;
  }

  // Bracket theta with k(lo) < m < k(hi), then bisect (k strictly
  // increasing on (theta_lower, theta_plus)).
  double hi;
  if (std::isinf(theta_plus_)) {
    hi = 1.0;
    int guard = 0;
    while (k_of_theta(hi) < m) {
      hi *= 2.0;
      if (++guard > 60)
        throw NumericError("failed to bracket psi from above", hi);
    }
  } else {
    double delta = 0.25 * (theta_plus_ - theta_lower_);
    hi = theta_plus_ - delta;
    int guard = 0;
    while (k_of_theta(hi) < m) {
      delta *= 0.5;
      hi = theta_plus_ - delta;
      if (++guard > 50)
        throw NumericError("failed to bracket psi near theta_plus", delta);
    }
  }

  double lo;
  if (theta_lower_ == 0.0) {
    lo = std::min(0.5, 0.5 * hi);
    int guard = 0;
    while (k_of_theta(lo) >= m) {
      lo *= 0.5;
      if (++guard > 900)
        throw NumericError("failed to bracket psi from below", lo);
    }
  } else {
    double delta = 0.25 * (std::min(hi, 0.0) - theta_lower_);
    lo = theta_lower_ + delta;
    int guard = 0;
    while (k_of_theta(lo) >= m) {
      delta *= 0.5;
      lo = theta_lower_ + delta;
      if (++guard > 50)
        throw NumericError("failed to bracket psi near theta_lower", delta);
    }
  }

  for (int it = 0; it < 200; ++it) {
    const double width = hi - lo;
    if (width <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
    const double mid = 0.5 * (lo + hi);
    if (k_of_theta(mid) < m)
      lo = mid;
    else
      hi = mid;
  }
  const double theta = 0.5 * (lo + hi);
  {
    std::lock_guard<std::mutex> lock(psi_cache_->mutex);
    psi_cache_->values.emplace(m, theta);
  }
  return theta;
}

double CskFamily::pseudo_variance_inverted(double m) const {
  require_in_domain(m);
  if (m == 0.0) {
    const double h = 1e-5;
    return 0.5 * (pseudo_variance_inverted(h) + pseudo_variance_inverted(-h));
  }
  return m * (1.0 / psi(m) - m);
}

double CskFamily::pseudo_variance(double m) const {
  require_in_domain(m);
  if (const ClosedForms* cf = law_.closed_forms(); cf && cf->pseudo_variance)
    return cf->pseudo_variance(m);
  return pseudo_variance_inverted(m);
}

double CskFamily::pv_over_m(double m) const {
  require_in_domain(m);
  if (m == 0.0) return 1.0 / psi(0.0);
  if (const ClosedForms* cf = law_.closed_forms(); cf && cf->pv_over_m)
    return cf->pv_over_m(m);
  return 1.0 / psi(m) - m;
}

double CskFamily::variance(double m) const {
  require_in_domain(m);
  if (std::isinf(mean_))
    throw DomainError("variance undefined for this family (mean is -inf)");
  if (mean_ == 0.0) return pseudo_variance(m);
  return (m - mean_) * pv_over_m(m);
}

double CskFamily::z_of_m(double m) const { return m + pv_over_m(m); }

Measure CskFamily::tilt_with_ratio(double m, double r) const {
  const Measure& base = law_.measure();
  std::vector<Atom> atoms;
  for (const Atom& a : base.atoms())
    atoms.push_back({a.location, a.weight * tilt_kernel(m, r, a.location)});
  if (!base.has_density()) return Measure::atomic(std::move(atoms));
  auto density = [fn = base.density_fn(), m, r](double x, double s_lo,
                                                double s_hi) {
    return tilt_kernel(m, r, x) * fn(x, s_lo, s_hi);
  };
  if (atoms.empty())
    return Measure::absolutely_continuous(density, base.support());
  return Measure::mixed(density, base.support(), std::move(atoms));
}

Measure CskFamily::member(double m) const {
  require_in_domain(m);
  if (m == 0.0) {
    const double theta0 = psi(0.0);
    if (std::abs(theta0) < 1e-12) return law_.measure();
    return tilt_with_ratio(0.0, 1.0 / theta0);
  }
  return tilt_with_ratio(m, pv_over_m(m));
}

PseudoVariance CskFamily::pseudo_variance_function() const {
  PseudoVariance pv;
  pv.lo = m0_;
  pv.hi = m_plus_;
  const ClosedForms* cf = law_.closed_forms();
  if (cf && cf->pseudo_variance) {
    pv.provenance = PvProvenance::closed_form;
    pv.eval = cf->pseudo_variance;
  } else {
    pv.provenance = PvProvenance::inverted;
    CskFamily self = *this;
    pv.eval = [self](double m) { return self.pseudo_variance_inverted(m); };
  }
  return pv;
}

CskFamily build_family(const Law& law, const QuadratureConfig& cfg) {
  CskFamily fam;
  fam.law_ = law;
  fam.cfg_ = cfg;

  const SupportBounds b = support_bounds(law);
  fam.A_ = b.A;
  fam.B_ = b.B;
  fam.theta_plus_ = b.theta_plus;
  fam.theta_lower_ = law.theta_lower();

  fam.mean_ = mean_limit_at_zero(law, cfg);
  // The extrapolated limit carries ~1e-12 noise; an exactly-zero mean (every
  // symmetric catalog law) must be clean so the v(m) = V(m) identity and the
  // m = 0 member special case key off it reliably.
  if (std::abs(fam.mean_) < 1e-9) fam.mean_ = 0.0;
  fam.m0_ = law.two_sided() ? mean_limit_at(law, law.theta_lower(), cfg)
                            : fam.mean_;

  fam.g_at_B_ = cauchy_transform_at_B(law, cfg);
  fam.m_plus_ =
      std::isinf(fam.g_at_B_) ? fam.B_ : fam.B_ - 1.0 / fam.g_at_B_;

  if (!(fam.m0_ < fam.m_plus_))
    throw NumericError("computed domain of means is empty",
                       fam.m_plus_ - fam.m0_);
  return fam;
}

}  // namespace csk
