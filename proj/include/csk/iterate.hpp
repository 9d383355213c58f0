#pragma once

#include "csk/family.hpp"

namespace csk {

// The CSK family generated by the member Q_{m1} of a base family:
// transforms M1/k1, the mean map m -> mbar, its domain (m1, mbar_plus), and
// the iterated (pseudo-)variance.
class IteratedFamily {
 public:
  const CskFamily& base() const { return base_; }
  double m1() const { return m1_; }
  double theta1() const { return theta1_; }
  double mbar0() const { return m1_; }
  double mbar_plus() const { return mbar_plus_; }

  // M1(theta) in two branches; the |theta - theta1| < 1e-7 window uses the
  // derivative form.
  double m_transform(double theta) const;
  // k1(theta), strictly increasing on (0, theta_plus).
  double mean(double theta) const;
  // mbar(m): the mean map, a bijection (m0, m_plus) -> (m1, mbar_plus).
  double mean_map(double m) const;
  double mean_map_inverse(double mbar) const;
  // V1(mbar) through the mean map: V1/mbar + mbar = V/m + m.
  double pseudo_variance(double mbar) const;
  // v1(mbar) = (mbar - m1) V1(mbar)/mbar.
  double variance(double mbar) const;
  // Inverse of k1, by bisection (for the psi-preservation identity).
  double psi1(double mbar) const;

  // Q_{m1} itself, for re-wrapping as a raw law.
  Measure member_measure() const;

 private:
  friend IteratedFamily iterate_family(const CskFamily&, double);
  CskFamily base_;
  double m1_ = 0.0;
  double theta1_ = 0.0;
  double pv_m1_ = 0.0;       // V(m1)
  double pv_deriv_m1_ = 0.0; // V'(m1)
  double m_at_theta1_ = 0.0;
  double m_deriv_at_theta1_ = 0.0;
  double k_deriv_at_theta1_ = 0.0;
  double mbar_plus_ = 0.0;
};

IteratedFamily iterate_family(const CskFamily& base, double m1);

// Closed forms for quadratic v(m) = 1 + a m + b m^2 (centered, m0 = 0) and
// cubic V(m) = m (a m^2 + b m + c) base families.
struct IterateClosedForms {
  std::function<double(double)> m_of_mbar;
  std::function<double(double)> v1;
};

IterateClosedForms quadratic_closed_forms(double a, double b, double m1);
IterateClosedForms cubic_closed_forms(double a, double b, double c, double m1);

// K(a1,a2,a3,a4) = 2 pi (1 - a1 a2 a3 a4) prod_{i<j} (1 - ai aj)^-1 for
// |ai| < 1; equals the integral of sqrt(4-x^2) prod (1 + aj^2 - aj x)^-1
// over (-2,2).
double aw_integral(double a1, double a2, double a3, double a4);

// Twice-iterated semicircle variance function (quadratic in m), valid for
// m in (m2, m2 + m1^2 - m1 m2 + 1).
double semicircle_v2_closed(double m1, double m2, double m);

}  // namespace csk
