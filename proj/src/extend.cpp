#include "csk/extend.hpp"

#include <cmath>
#include <limits>

#include "csk/errors.hpp"
#include "csk/transforms.hpp"

namespace csk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double scale_of(double x) { return std::max(1.0, std::abs(x)); }

// Bracket a minimum of f above lo: walk right until f turns upward, then
// golden-section. f is decreasing-then-increasing on the range of interest.
double minimize_unimodal(const std::function<double(double)>& f, double lo) {
  double a = lo;
  double step = 0.25 * scale_of(lo);
  double b = a + step;
  double c = b + step;
  int guard = 0;
  while (f(c) <= f(b)) {
    b = c;
    step *= 2.0;
    c = b + step;
    if (++guard > 200)
      throw NumericError("failed to bracket the h minimum", c);
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - gr * (c - a);
  double x2 = a + gr * (c - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && c - a > 1e-12 * scale_of(a); ++i) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - gr * (c - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (c - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + c);
}

}  // namespace

double pv_ratio_sign_change(const std::function<double(double)>& pv_over_m,
                            double start, double horizon) {
  const double s = scale_of(start);
  // The ratio can dip negative immediately past the start point.
  for (double d : {1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4}) {
    if (pv_over_m(start + d * s) < 0.0) return start;
  }
  double prev = start + 1e-4 * s;
  double step = 1e-3 * s;
  while (prev + step <= start + horizon) {
    const double next = prev + step;
    if (pv_over_m(next) < 0.0) {
      double lo = prev, hi = next;
      for (int i = 0; i < 200 && hi - lo > 1e-12 * scale_of(lo); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pv_over_m(mid) < 0.0)
          hi = mid;
        else
          lo = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = next;
    step *= 1.5;
  }
  return kInf;
}

double ExtendedFamily::pv_over_m_closed(double m) const {
  const ClosedForms* cf = base_.law().closed_forms();
  if (!cf || !cf->pv_over_m)
    throw DomainError(
        "extension beyond m_plus_bold needs a closed-form pseudo-variance");
  return cf->pv_over_m(m);
}

double ExtendedFamily::h(double m) const { return pv_over_m_closed(m) + m; }

double ExtendedFamily::h_numeric(double m) const {
  const double margin = 1e-9 * scale_of(base_.m_plus());
  if (m < base_.m_plus() - margin) return 1.0 / base_.psi(m);
  if (m <= base_.m_plus() + margin) return base_.support_B();
  return 1.0 / psi_ext(m);
}

double ExtendedFamily::psi_ext(double m) const {
  if (!(A_ < 0.0))
    throw DomainError("negative-theta branch requires A(nu) < 0");
  if (!(m > base_.m_plus() && m < m_plus_bold_))
    throw DomainError("psi_ext is defined on (m_plus, m_plus_bold)");
  const double edge = 1.0 / A_;

  double delta = 0.5 * std::abs(edge);
  double hi = edge - delta;
  int guard = 0;
  while (base_.k_of_theta(hi) < m) {
    delta *= 0.5;
    hi = edge - delta;
    if (++guard > 60)
      throw NumericError("failed to bracket psi_ext near 1/A", delta);
  }
  double lo = edge - std::abs(edge);
  guard = 0;
  while (base_.k_of_theta(lo) > m) {
    lo = edge - 2.0 * (edge - lo);
    if (++guard > 80)
      throw NumericError("failed to bracket psi_ext from below", lo);
  }
  for (int i = 0; i < 200; ++i) {
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) break;
    const double mid = 0.5 * (lo + hi);
    if (base_.k_of_theta(mid) < m)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ExtendedFamily::pv_beyond(double m) const {
  if (!(m > base_.m0()))
    throw DomainError("m below the domain of means");
  const ClosedForms* cf = base_.law().closed_forms();
  if (cf && cf->pseudo_variance) return cf->pseudo_variance(m);
  if (m < base_.m_plus()) return base_.pseudo_variance(m);
  return m * (h_numeric(m) - m);
}

double ExtendedFamily::atom_weight(double m) const {
  if (!(m > base_.m0() && m < M_plus_bold_))
    throw DomainError("m outside (m0, M_plus_bold)");
  if (m <= base_.m_plus()) return 0.0;

  const ClosedForms* cf = base_.law().closed_forms();
  const double ratio = (cf && cf->pv_over_m) ? cf->pv_over_m(m)
                                             : h_numeric(m) - m;
  if (ratio < 0.0)
    throw DomainError("V(m)/m negative: m is beyond the second extension");
  const double z = m + ratio;
  const double g = cauchy_transform_quadrature(base_.law(), z, base_.config(),
                                               /*allow_at_A=*/true);
  double p = 1.0 - ratio * g;
  if (p < 0.0) {
    if (p < -1e-7)
      throw NumericError("atom weight escaped [0,1]", p);
    p = 0.0;
  }
  if (p > 1.0) {
    if (p > 1.0 + 1e-7)
      throw NumericError("atom weight escaped [0,1]", p - 1.0);
    p = 1.0;
  }
  return p;
}

ExtendedMember ExtendedFamily::member(double m) const {
  if (!(m > base_.m0() && m < M_plus_bold_))
    throw DomainError("m outside (m0, M_plus_bold)");
  const ClosedForms* cf = base_.law().closed_forms();
  double ratio;
  if (m == 0.0) {
    ratio = (cf && cf->pv_over_m) ? cf->pv_over_m(m) : 1.0 / base_.psi(0.0);
  } else if (cf && cf->pv_over_m) {
    ratio = cf->pv_over_m(m);
  } else if (m < base_.m_plus()) {
    ratio = base_.pv_over_m(m);
  } else {
    ratio = h_numeric(m) - m;
  }
  ExtendedMember out{base_.tilt_with_ratio(m, ratio), m + ratio,
                     atom_weight(m)};
  return out;
}

bool ExtendedFamily::companion_bracket(double target, double* lo,
                                       double* hi) const {
  // h(m_plus_bold) = A(nu) in every regime; a companion needs h to climb
  // back up to the target, so targets at or below A have an empty set.
  if (!(target > A_)) return false;
  const double start = m_plus_bold_;
  const double s = scale_of(start);
  double prev = start;
  double step = 1e-6 * s;
  while (prev + step <= start + 1e6 * s) {
    const double next = prev + step;
    if (h(next) >= target) {
      *lo = prev;
      *hi = next;
      return true;
    }
    prev = next;
    step *= 2.0;
  }
  return false;
}

double ExtendedFamily::companion(double m) const {
  if (!has_companions_)
    throw NoExtensionError("cannot extend: the companion set is empty");
  if (!(m > m_tilde_ && m < m_plus_bold_))
    throw DomainError("m outside (m_tilde, m_plus_bold)");
  const double target = h(m);
  double lo, hi;
  if (!companion_bracket(target, &lo, &hi))
    throw NoExtensionError("no companion within the search horizon");
  for (int i = 0; i < 200; ++i) {
    if (hi - lo <= 1e-13 * scale_of(hi)) break;
    const double mid = 0.5 * (lo + hi);
    if (h(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ExtendedFamily::companion_inverse(double mbar) const {
  if (!has_companions_)
    throw NoExtensionError("cannot extend: the companion set is empty");
  // g is strictly decreasing from M_tilde down to m_plus_bold.
  double hi;
  {
    double delta = 0.25 * scale_of(m_plus_bold_);
    hi = m_plus_bold_ - delta;
    int guard = 0;
    while (hi <= m_tilde_ || companion(hi) > mbar) {
      delta *= 0.5;
      hi = m_plus_bold_ - delta;
      if (++guard > 60)
        throw NumericError("failed to bracket g^-1 near m_plus_bold", delta);
    }
  }
  double lo;
  {
    int guard = 0;
    if (std::isinf(m_tilde_)) {
      lo = hi - scale_of(hi);
      while (companion(lo) < mbar) {
        lo = hi - 2.0 * (hi - lo);
        if (++guard > 200)
          throw NumericError("failed to bracket g^-1 from below", lo);
      }
    } else {
      double delta = 0.5 * (hi - m_tilde_);
      lo = m_tilde_ + delta;
      while (companion(lo) < mbar) {
        delta *= 0.5;
        lo = m_tilde_ + delta;
        if (++guard > 100)
          throw NumericError("failed to bracket g^-1 near m_tilde", delta);
      }
    }
  }
  for (int i = 0; i < 200; ++i) {
    if (hi - lo <= 1e-13 * scale_of(hi)) break;
    const double mid = 0.5 * (lo + hi);
    if (companion(mid) > mbar)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ExtendedFamily::extended_pseudo_variance(double m) const {
  if (!(M_plus_bold_ > m_plus_bold_))
    throw NoExtensionError(
        "cannot extend the family beyond the first extension bound");
  if (!(m > m_plus_bold_ && m < M_plus_bold_))
    throw DomainError("m outside (m_plus_bold, M_plus_bold)");
  if (!has_companions_)
    throw NoExtensionError("cannot extend: the companion set is empty");
  const double preimage = companion_inverse(m);
  return m * (h_numeric(preimage) - m);
}

double ExtendedFamily::free_power_bound(double alpha) const {
  if (!(alpha >= 1.0))
    throw DomainError("free convolution power needs alpha >= 1");
  const ClosedForms* cf = base_.law().closed_forms();
  if (!cf || !cf->pv_over_m)
    throw DomainError("free power scaling needs a closed-form pseudo-variance");
  auto scaled_ratio = [cf, alpha](double m) { return cf->pv_over_m(m / alpha); };
  const double bound =
      pv_ratio_sign_change(scaled_ratio, alpha * m_plus_bold_);
  const double expected = alpha * M_plus_bold_;
  if (std::isinf(bound) != std::isinf(expected))
    throw NumericError("free power bound disagrees with alpha*M_plus_bold",
                       kInf);
  if (!std::isinf(bound) &&
      std::abs(bound - expected) > 1e-8 * scale_of(expected))
    throw NumericError("free power bound disagrees with alpha*M_plus_bold",
                       std::abs(bound - expected));
  return bound;
}

ExtendedFamily build_extended(const CskFamily& base) {
  ExtendedFamily ext;
  ext.base_ = base;
  ext.A_ = base.support_A();
  const ClosedForms* cf = base.law().closed_forms();

  ext.m_plus_bold_theta_route_ = std::numeric_limits<double>::quiet_NaN();
  if (ext.A_ >= 0.0) {
    ext.m_plus_bold_ = base.m_plus();
  } else {
    // Eq (M+(k)): k(theta) as theta -> (1/A)^- with a sqrt-model fit (h has
    // zero slope at the minimum, so the approach is O(sqrt(1/A - theta))).
    const double edge = 1.0 / ext.A_;
    double hs[3], ks[3];
    for (int j = 0; j < 3; ++j) {
      hs[j] = std::pow(10.0, -(6 + j));
      ks[j] = base.k_of_theta(edge - hs[j]);
    }
    ext.m_plus_bold_theta_route_ = extrapolate_sqrt_fit(hs, ks);
    if (cf && cf->pv_over_m) {
      auto hfun = [&](double m) { return cf->pv_over_m(m) + m; };
      ext.m_plus_bold_ = minimize_unimodal(
          hfun, base.m_plus() + 1e-9 * scale_of(base.m_plus()));
    } else {
      ext.m_plus_bold_ = ext.m_plus_bold_theta_route_;
    }
  }

  if (cf && cf->pv_over_m) {
    ext.M_plus_bold_ =
        pv_ratio_sign_change(cf->pv_over_m, ext.m_plus_bold_);
  } else {
    ext.M_plus_bold_ = std::numeric_limits<double>::quiet_NaN();
  }

  // Companion interval: probe descending means; for every catalog law the
  // answer is all-or-nothing, but a boundary is bisected if one shows up.
  ext.has_companions_ = false;
  ext.m_tilde_ = std::numeric_limits<double>::quiet_NaN();
  ext.M_tilde_ = std::numeric_limits<double>::quiet_NaN();
  if (cf && cf->pv_over_m) {
    const double top = ext.m_plus_bold_;
    auto exists = [&](double m) {
      double lo, hi;
      return ext.companion_bracket(ext.h(m), &lo, &hi);
    };
    // The companion construction is one-sided: for a two-sided family the
    // scan floor is the theta->0+ limit (the mean), not the two-sided lower
    // endpoint. Probe depth stays shallow enough that a genuine companion is
    // always inside the m' search horizon; deeper means would truncate there.
    const double m0 = base.law().two_sided() ? base.mean() : base.m0();
    std::vector<double> probes;
    if (std::isinf(m0)) {
      for (int k = 0; k <= 12; k += 3)
        probes.push_back(top - std::pow(2.0, k));
    } else {
      for (int k = 1; k <= 5; ++k)
        probes.push_back(m0 + (top - m0) * std::pow(2.0, -k));
    }
    bool all = true, none = true;
    for (double p : probes) {
      if (!(p > m0 && p < top)) continue;
      const bool e = exists(p);
      all = all && e;
      none = none && !e;
    }
    if (all) {
      ext.has_companions_ = true;
      ext.m_tilde_ = m0;
    } else if (!none) {
      double lo = std::isinf(m0) ? top - std::pow(2.0, 20) : m0;
      double hi = top;
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (exists(mid))
          hi = mid;
        else
          lo = mid;
      }
      ext.has_companions_ = true;
      ext.m_tilde_ = 0.5 * (lo + hi);
    }
    if (ext.has_companions_) {
      if (std::isinf(ext.m_tilde_)) {
        ext.M_tilde_ = kInf;
      } else {
        const double probe =
            ext.m_tilde_ + 1e-6 * std::max(1.0, top - ext.m_tilde_);
        double lo, hi;
        if (ext.companion_bracket(ext.h(probe), &lo, &hi)) {
          const double g = ext.companion(probe);
          ext.M_tilde_ = g > 1e5 * scale_of(top) ? kInf : g;
        } else {
          ext.M_tilde_ = kInf;
        }
      }
    }
  }
  return ext;
}

}  // namespace csk
