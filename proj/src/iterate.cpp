#include "csk/iterate.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "csk/errors.hpp"
#include "csk/transforms.hpp"

namespace csk {
namespace {

constexpr double kBranchWindow = 1e-7;

}  // namespace

IteratedFamily iterate_family(const CskFamily& base, double m1) {
  if (!(m1 > base.m0() && m1 < base.m_plus()))
    throw DomainError("m1 outside the base domain of means");

  IteratedFamily it;
  it.base_ = base;
  it.m1_ = m1;
  it.theta1_ = base.psi(m1);
  it.pv_m1_ = base.pseudo_variance(m1);

  const ClosedForms* cf = base.law().closed_forms();
  if (cf && cf->pv_derivative) {
    it.pv_deriv_m1_ = cf->pv_derivative(m1);
  } else {
    const double h = 1e-5;
    it.pv_deriv_m1_ = (base.pseudo_variance(m1 + h) -
                       base.pseudo_variance(m1 - h)) /
                      (2.0 * h);
  }

  it.m_at_theta1_ = base.m_transform_at(it.theta1_);
  it.m_deriv_at_theta1_ =
      m_transform_derivative(base.law(), it.theta1_, base.config());
  const double tm = it.theta1_ * it.m_at_theta1_;
  it.k_deriv_at_theta1_ =
      (it.m_at_theta1_ + it.theta1_ * it.m_deriv_at_theta1_ -
       it.m_at_theta1_ * it.m_at_theta1_) /
      (tm * tm);

  const double g = base.g_at_B();
  if (std::isinf(g)) {
    it.mbar_plus_ = base.m_plus();
  } else {
    const double ratio = m1 / it.pv_m1_;
    const double denom = g - ratio;
    if (std::abs(denom) <= 1e-12 * (std::abs(g) + std::abs(ratio)))
      throw NumericError(
          "iterated-domain formula degenerates: G(B) = m1^2/V(m1)", denom);
    it.mbar_plus_ = (base.m_plus() * g - m1 * ratio) / denom;
  }
  return it;
}

double IteratedFamily::m_transform(double theta) const {
  if (!(theta > 0.0 && theta < base_.theta_plus()))
    throw DomainError("theta outside (0, theta_plus)");
  if (std::abs(theta - theta1_) < kBranchWindow) {
    return (m_at_theta1_ + theta1_ * m_deriv_at_theta1_) / m_at_theta1_;
  }
  const double m = base_.m_transform_at(theta);
  return (theta * m - theta1_ * m_at_theta1_) /
         (m_at_theta1_ * (theta - theta1_));
}

double IteratedFamily::mean(double theta) const {
  if (!(theta > 0.0 && theta < base_.theta_plus()))
    throw DomainError("theta outside (0, theta_plus)");
  if (std::abs(theta - theta1_) < kBranchWindow) {
    return (m1_ + theta1_ * k_deriv_at_theta1_) /
           (1.0 + theta1_ * theta1_ * k_deriv_at_theta1_);
  }
  const double k = base_.k_of_theta(theta);
  return (theta * k - theta1_ * m1_) /
         ((theta - theta1_) + theta * theta1_ * (k - m1_));
}

double IteratedFamily::mean_map(double m) const {
  if (!(m > base_.m0() && m < base_.m_plus()))
    throw DomainError("m outside the base domain of means");
  if (std::abs(m - m1_) < kBranchWindow) {
    return (2.0 * m1_ * pv_m1_ - m1_ * m1_ * pv_deriv_m1_) /
           (pv_m1_ - m1_ * pv_deriv_m1_);
  }
  const double pv = base_.pseudo_variance(m);
  return (m * m * pv_m1_ - m1_ * m1_ * pv) / (m * pv_m1_ - m1_ * pv);
}

double IteratedFamily::mean_map_inverse(double mbar) const {
  if (!(mbar > m1_ && mbar < mbar_plus_))
    throw DomainError("mbar outside the iterated domain of means");

  double hi;
  if (std::isinf(base_.m_plus())) {
    hi = m1_ + 1.0;
    int guard = 0;
    while (mean_map(hi) < mbar) {
      hi = m1_ + 2.0 * (hi - m1_);
      if (++guard > 200)
        throw NumericError("failed to bracket the mean map from above", hi);
    }
  } else {
    double delta = 0.25 * std::min(base_.m_plus() - m1_, 1.0);
    hi = base_.m_plus() - delta;
    int guard = 0;
    while (hi <= base_.m0() || mean_map(hi) < mbar) {
      delta *= 0.5;
      hi = base_.m_plus() - delta;
      if (++guard > 60)
        throw NumericError("failed to bracket the mean map near m_plus",
                           delta);
    }
  }

  double lo;
  if (std::isinf(base_.m0())) {
    lo = m1_ - 1.0;
    int guard = 0;
    while (mean_map(lo) > mbar) {
      lo = m1_ - 2.0 * (m1_ - lo);
      if (++guard > 200)
        throw NumericError("failed to bracket the mean map from below", lo);
    }
  } else {
    double delta = 0.25 * std::min(hi - base_.m0(), 1.0);
    lo = base_.m0() + delta;
    int guard = 0;
    while (lo >= hi || mean_map(lo) > mbar) {
      delta *= 0.5;
      lo = base_.m0() + delta;
      if (++guard > 60)
        throw NumericError("failed to bracket the mean map near m0", delta);
    }
  }

  for (int i = 0; i < 200; ++i) {
    if (hi - lo <= 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
    const double mid = 0.5 * (lo + hi);
    if (mean_map(mid) < mbar)
      lo = mid;
    else
      hi = mid;
  }
  double m = 0.5 * (lo + hi);

  // mean_map is constant on |m - m1| < kBranchWindow (the derivative
  // branch), so the bisection can only reach the window edge there;
  // linearize through the window instead.
  if (std::abs(m - m1_) < 8.0 * kBranchWindow) {
    const double step = 4.0 * kBranchWindow;
    const double mbar1 = mean_map(m1_);
    const double slope =
        (mean_map(m1_ + step) - mean_map(m1_ - step)) / (2.0 * step);
    if (slope > 0.0) {
      const double polished = m1_ + (mbar - mbar1) / slope;
      if (polished > base_.m0() && polished < base_.m_plus()) m = polished;
    }
  }
  return m;
}

double IteratedFamily::pseudo_variance(double mbar) const {
  const double m = mean_map_inverse(mbar);
  return mbar * (base_.pv_over_m(m) + m - mbar);
}

double IteratedFamily::variance(double mbar) const {
  // (mbar - m1) V1(mbar)/mbar without the removable 0/0 at mbar = 0.
  const double m = mean_map_inverse(mbar);
  return (mbar - m1_) * (base_.pv_over_m(m) + m - mbar);
}

double IteratedFamily::psi1(double mbar) const {
  if (!(mbar > m1_ && mbar < mbar_plus_))
    throw DomainError("mbar outside the iterated domain of means");
  double hi;
  if (std::isinf(base_.theta_plus())) {
    hi = 1.0;
    int guard = 0;
    while (mean(hi) < mbar) {
      hi *= 2.0;
      if (++guard > 60)
        throw NumericError("failed to bracket psi1 from above", hi);
    }
  } else {
    double delta = 0.25 * base_.theta_plus();
    hi = base_.theta_plus() - delta;
    int guard = 0;
    while (mean(hi) < mbar) {
      delta *= 0.5;
      hi = base_.theta_plus() - delta;
      if (++guard > 50)
        throw NumericError("failed to bracket psi1 near theta_plus", delta);
    }
  }
  double lo = std::min(0.5, 0.5 * hi);
  int guard = 0;
  while (mean(lo) >= mbar) {
    lo *= 0.5;
    if (++guard > 900)
      throw NumericError("failed to bracket psi1 from below", lo);
  }
  for (int i = 0; i < 200; ++i) {
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) break;
    const double mid = 0.5 * (lo + hi);
    if (mean(mid) < mbar)
      lo = mid;
    else
      hi = mid;
  }
  double theta = 0.5 * (lo + hi);

  if (std::abs(theta - theta1_) < 8.0 * kBranchWindow) {
    const double step = 4.0 * kBranchWindow;
    const double mbar1 = mean(theta1_);
    const double slope =
        (mean(theta1_ + step) - mean(theta1_ - step)) / (2.0 * step);
    if (slope > 0.0) {
      const double polished = theta1_ + (mbar - mbar1) / slope;
      if (polished > 0.0 && polished < base_.theta_plus()) theta = polished;
    }
  }
  return theta;
}

Measure IteratedFamily::member_measure() const { return base_.member(m1_); }

IterateClosedForms quadratic_closed_forms(double a, double b, double m1) {
  IterateClosedForms forms;
  forms.m_of_mbar = [a, b, m1](double mbar) {
    return (mbar - m1) / (1.0 + a * m1 + b * m1 * mbar);
  };
  forms.v1 = [a, b, m1](double mbar) {
    const double p = (1.0 + mbar * (a + b * mbar)) *
                     (1.0 + m1 * (a - mbar + (b + 1.0) * m1));
    return p / (1.0 + a * m1 + b * m1 * mbar);
  };
  return forms;
}

IterateClosedForms cubic_closed_forms(double a, double b, double c,
                                      double m1) {
  if (!(a > 0.0))
    throw DomainError("cubic pseudo-variance needs a > 0");
  IterateClosedForms forms;
  forms.m_of_mbar = [a, b, c, m1](double mbar) {
    return -(mbar * (b + a * m1) + c) / (a * (mbar - m1));
  };
  forms.v1 = [a, b, c, m1](double mbar) {
    const double q = (c + mbar * (b + a * mbar)) *
                     (c - mbar + m1 * (b + a * m1 + 1.0));
    return q / (a * (mbar - m1));
  };
  return forms;
}

double aw_integral(double a1, double a2, double a3, double a4) {
  const double a[4] = {a1, a2, a3, a4};
  for (double v : a) {
    if (!(std::abs(v) < 1.0))
      throw DomainError("aw_integral needs |a_i| < 1");
  }
  double prod = 1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) prod *= 1.0 - a[i] * a[j];
  return 2.0 * std::numbers::pi * (1.0 - a1 * a2 * a3 * a4) / prod;
}

double semicircle_v2_closed(double m1, double m2, double m) {
  return (1.0 - (m - m1) * m1) * ((m1 - m2) * (m + m1 - m2) + 1.0) /
         (m1 * m1 - m2 * m1 + 1.0);
}

}  // namespace csk
