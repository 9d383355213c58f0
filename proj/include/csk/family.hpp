#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "csk/law.hpp"
#include "csk/measure.hpp"
#include "csk/quadrature.hpp"

namespace csk {

enum class PvProvenance { closed_form, inverted };

struct PseudoVariance {
  std::function<double(double)> eval;
  PvProvenance provenance = PvProvenance::inverted;
  double lo = 0.0;  // valid open interval = domain of means
  double hi = 0.0;
};

// The CSK family of a law: domain of means, psi inversion, (pseudo-)variance
// and tilted members Q_m. Immutable after build; evaluations are pure (a
// shared memo of psi values sits behind a mutex).
class CskFamily {
 public:
  const Law& law() const { return law_; }
  const QuadratureConfig& config() const { return cfg_; }

  double m0() const { return m0_; }            // lower mean endpoint, -inf ok
  double m_plus() const { return m_plus_; }    // natural upper mean endpoint
  double mean() const { return mean_; }        // mean of nu (theta->0+ limit)
  double theta_plus() const { return theta_plus_; }
  double theta_lower() const { return theta_lower_; }
  double g_at_B() const { return g_at_B_; }    // lim_{b->B+} G(b), +inf ok
  double support_A() const { return A_; }
  double support_B() const { return B_; }

  // Inverse of k on (theta_lower, theta_plus), realized by bisection.
  double psi(double m) const;

  double k_of_theta(double theta) const;
  double m_transform_at(double theta) const;

  // V(m): catalog closed form when present, else m*(1/psi(m) - m).
  double pseudo_variance(double m) const;
  // Always the psi route (the inversion oracle the closed forms are checked
  // against).
  double pseudo_variance_inverted(double m) const;
  // V(m)/m; at an interior m = 0 returns 1/psi(0).
  double pv_over_m(double m) const;

  // v(m) = (m - mean) V(m)/m; DomainError when the mean is -inf.
  double variance(double m) const;

  // z(m) = m + V(m)/m.
  double z_of_m(double m) const;

  // Tilted member Q_m for m in the domain of means.
  Measure member(double m) const;

  // Kernel tilt with an externally supplied value of V(m)/m. No domain
  // check; extensions reuse it beyond m_plus.
  Measure tilt_with_ratio(double m, double pv_over_m_value) const;

  PseudoVariance pseudo_variance_function() const;

 private:
  friend CskFamily build_family(const Law&, const QuadratureConfig&);

  void require_in_domain(double m) const;

  Law law_;
  QuadratureConfig cfg_;
  double m0_ = 0.0;
  double mean_ = 0.0;
  double m_plus_ = 0.0;
  double theta_plus_ = 0.0;
  double theta_lower_ = 0.0;
  double g_at_B_ = 0.0;
  double A_ = 0.0;
  double B_ = 0.0;

  struct PsiCache {
    std::mutex mutex;
    std::map<double, double> values;
  };
  std::shared_ptr<PsiCache> psi_cache_ = std::make_shared<PsiCache>();
};

CskFamily build_family(const Law& law, const QuadratureConfig& cfg = {});

}  // namespace csk
