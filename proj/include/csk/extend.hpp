#pragma once

#include "csk/family.hpp"

namespace csk {

// A member of the second extension: tilted a.c. part plus the atom at
// z(m) = m + V(m)/m with weight p(m).
struct ExtendedMember {
  Measure ac_part;
  double atom_location = 0.0;
  double atom_weight = 0.0;  // in [0,1]; 0 for m <= m_plus
};

// Both domain-of-means extensions of a family: the first to (m0, m_plus_bold)
// through the negative-theta branch (nontrivial only when A(nu) < 0), and the
// second to (m0, M_plus_bold) through members with an atom; plus the
// companion mean map g pairing means across m_plus_bold.
class ExtendedFamily {
 public:
  const CskFamily& base() const { return base_; }

  double m_plus_bold() const { return m_plus_bold_; }
  double M_plus_bold() const { return M_plus_bold_; }
  // Eq-(M+(k)) route, computed for A < 0 only (NaN otherwise); the verify
  // suite compares it against m_plus_bold().
  double m_plus_bold_theta_route() const { return m_plus_bold_theta_route_; }

  bool has_companions() const { return has_companions_; }
  double m_tilde() const { return m_tilde_; }
  double M_tilde() const { return M_tilde_; }

  // h(m) = V(m)/m + m through the catalog closed form (analytic
  // continuation); DomainError for raw laws.
  double h(double m) const;
  // h through the numeric psi routes; valid for m < m_plus_bold.
  double h_numeric(double m) const;

  // Inverse of k on the branch (-inf, 1/A); requires A < 0.
  double psi_ext(double m) const;

  // V on (m0, M_plus_bold): closed form when present, else the psi routes
  // (which reach up to m_plus_bold only).
  double pv_beyond(double m) const;

  // p(m): exactly 0 for m <= m_plus, else 1 - (V/m) G(m + V/m).
  double atom_weight(double m) const;

  // Q-bar_m: probability for all m in (m0, M_plus_bold), mean m.
  ExtendedMember member(double m) const;

  // g(m) = inf{ m' >= m_plus_bold : h(m') = h(m) }, strictly decreasing on
  // (m_tilde, m_plus_bold). NoExtensionError when the companion set is empty.
  double companion(double m) const;
  double companion_inverse(double mbar) const;

  // V on (m_plus_bold, M_plus_bold) realized through the companion map and
  // the numeric psi of the preimage (the psi-bar construction).
  double extended_pseudo_variance(double m) const;

  // M_plus_bold of the alpha-th free convolution power (V scaled as
  // alpha*V(m/alpha)), re-derived by the sign scan and checked against
  // alpha * M_plus_bold.
  double free_power_bound(double alpha) const;

 private:
  friend ExtendedFamily build_extended(const CskFamily&);

  double pv_over_m_closed(double m) const;
  bool companion_bracket(double target, double* lo, double* hi) const;

  CskFamily base_;
  double A_ = 0.0;
  double m_plus_bold_ = 0.0;
  double M_plus_bold_ = 0.0;
  double m_plus_bold_theta_route_ = 0.0;
  double m_tilde_ = 0.0;
  double M_tilde_ = 0.0;
  bool has_companions_ = false;
};

ExtendedFamily build_extended(const CskFamily& base);

// First sign change of pv_over_m on (start, start + horizon): +inf when the
// ratio stays nonnegative. Shared by the second-extension bound and the
// free-power scaling check.
double pv_ratio_sign_change(const std::function<double(double)>& pv_over_m,
                            double start, double horizon = 1e6);

}  // namespace csk
