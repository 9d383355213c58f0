#include "csk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "csk/errors.hpp"

namespace csk {

Measure Measure::absolutely_continuous(EdgeAwareFn density,
                                       AcSupport support) {
  Measure m;
  m.density_ = std::move(density);
  m.support_ = support;
  return m;
}

Measure Measure::atomic(std::vector<Atom> atoms) {
  Measure m;
  m.atoms_ = std::move(atoms);
  for (std::size_t i = 0; i < m.atoms_.size(); ++i) {
    if (m.atoms_[i].weight < 0.0)
      throw DomainError("atom weights must be nonnegative");
    for (std::size_t j = i + 1; j < m.atoms_.size(); ++j) {
      if (m.atoms_[i].location == m.atoms_[j].location)
        throw DomainError("atom locations must be distinct");
    }
  }
  m.support_.lower = std::numeric_limits<double>::quiet_NaN();
  m.support_.upper = std::numeric_limits<double>::quiet_NaN();
  return m;
}

Measure Measure::mixed(EdgeAwareFn density, AcSupport support,
                       std::vector<Atom> atoms) {
  Measure m = atomic(std::move(atoms));
  m.density_ = std::move(density);
  m.support_ = support;
  return m;
}

double Measure::density(double x) const {
  if (!density_) throw DomainError("measure has no absolutely continuous part");
  if (!(x > support_.lower && x < support_.upper))
    throw DomainError("x outside the open a.c. support");
  return density_(x, x - support_.lower, support_.upper - x);
}

double Measure::density_unchecked(double x) const {
  if (!density_ || !(x > support_.lower && x < support_.upper)) return 0.0;
  return density_(x, x - support_.lower, support_.upper - x);
}

double Measure::density_at(double x, double s_lo, double s_hi) const {
  if (!density_ || !(s_lo > 0.0) || !(s_hi > 0.0)) return 0.0;
  return density_(x, s_lo, s_hi);
}

double Measure::sup_support() const {
  double s = -std::numeric_limits<double>::infinity();
  if (density_) s = support_.upper;
  for (const Atom& a : atoms_) s = std::max(s, a.location);
  return s;
}

double Measure::inf_support() const {
  double s = std::numeric_limits<double>::infinity();
  if (density_) s = support_.lower;
  for (const Atom& a : atoms_) s = std::min(s, a.location);
  return s;
}

IntegralResult integrate_result_edge_aware(const EdgeAwareFn& f,
                                           const Measure& mu,
                                           const QuadratureConfig& cfg) {
  IntegralResult res;
  if (mu.has_density()) {
    const AcSupport& s = mu.support();
    const EdgeAwareFn& density = mu.density_fn();
    auto integrand = [&density, &f](double x, double s_lo, double s_hi) {
      return f(x, s_lo, s_hi) * density(x, s_lo, s_hi);
    };
    res = integrate_panels(
        make_panels(std::function<double(double, double, double)>(integrand),
                    s.lower, s.upper, s.lower_kind, s.upper_kind),
        cfg);
  } else {
    res.converged = true;
  }
  for (const Atom& a : mu.atoms()) {
    const double inf = std::numeric_limits<double>::infinity();
    res.value += a.weight * f(a.location, inf, inf);
  }
  return res;
}

double integrate_edge_aware(const EdgeAwareFn& f, const Measure& mu,
                            const QuadratureConfig& cfg) {
  IntegralResult res = integrate_result_edge_aware(f, mu, cfg);
  if (!res.converged) {
    throw NumericError("quadrature did not converge", res.error_estimate);
  }
  return res.value;
}

IntegralResult integrate_result(const std::function<double(double)>& f,
                                const Measure& mu,
                                const QuadratureConfig& cfg) {
  return integrate_result_edge_aware(
      [&f](double x, double, double) { return f(x); }, mu, cfg);
}

double integrate(const std::function<double(double)>& f, const Measure& mu,
                 const QuadratureConfig& cfg) {
  IntegralResult res = integrate_result(f, mu, cfg);
  if (!res.converged) {
    throw NumericError("quadrature did not converge", res.error_estimate);
  }
  return res.value;
}

}  // namespace csk
