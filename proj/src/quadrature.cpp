#include "csk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "csk/errors.hpp"

namespace csk {
namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 coefficients).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
  double integral;
  double error;
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  const double fc = f(center);
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }

  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double fsum = fv[j] + fv[14 - j];
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] *
              (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));
  }

  resk *= half;
  resg *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);

  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * eps)) {
    err = std::max(eps * 50.0 * resabs, err);
  }
  return {resk, err};
}

struct HeapEntry {
  double error;
  double value;
  double lo;
  double hi;
  const std::function<double(double)>* f;
  bool operator<(const HeapEntry& other) const { return error < other.error; }
};

}  // namespace

IntegralResult integrate_panels(std::vector<Panel> panels,
                                const QuadratureConfig& cfg) {
  std::priority_queue<HeapEntry> heap;
  double total = 0.0;
  double total_err = 0.0;
  // Contributions from panels too narrow to split further.
  double frozen = 0.0;
  double frozen_err = 0.0;

  for (const Panel& p : panels) {
    if (!(p.hi > p.lo)) continue;
    PanelEval e = gk15(p.f, p.lo, p.hi);
    heap.push({e.error, e.integral, p.lo, p.hi, &p.f});
    total += e.integral;
    total_err += e.error;
  }

  IntegralResult res;
  int splits = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    const double target =
        std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total + frozen));
    if (total_err + frozen_err <= target || heap.empty()) break;
    if (splits >= cfg.max_subdivisions) break;

    HeapEntry worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_err -= worst.error;

    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi ||
        worst.hi - worst.lo < eps * (std::abs(worst.lo) + std::abs(worst.hi))) {
      frozen += worst.value;
      frozen_err += worst.error;
      continue;
    }
    PanelEval left = gk15(*worst.f, worst.lo, mid);
    PanelEval right = gk15(*worst.f, mid, worst.hi);
    heap.push({left.error, left.integral, worst.lo, mid, worst.f});
    heap.push({right.error, right.integral, mid, worst.hi, worst.f});
    total += left.integral + right.integral;
    total_err += left.error + right.error;
    ++splits;
  }

  res.value = total + frozen;
  res.error_estimate = total_err + frozen_err;
  res.subdivisions = splits;
  res.converged = res.error_estimate <=
                  std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
  return res;
}

std::vector<Panel> make_panels(
    const std::function<double(double, double, double)>& f, double lo,
    double hi, EndpointKind lower_kind, EndpointKind upper_kind) {
  std::vector<Panel> panels;
  if (std::isinf(hi)) {
    throw DomainError("integration requires a finite upper endpoint");
  }
  const double kInf = std::numeric_limits<double>::infinity();

  // Distances are always measured to the true support endpoints (lo, hi);
  // on a substituted panel the substituted side's distance is t^2, exact in
  // floating point even when x itself rounds onto the endpoint.
  auto upper_sub = [&](double from) {
    panels.push_back(Panel{
        [f, lo, hi, kInf](double t) {
          const double s = t * t;
          const double x = hi - s;
          return f(x, std::isinf(lo) ? kInf : x - lo, s) * 2.0 * t;
        },
        0.0, std::sqrt(hi - from)});
  };
  auto lower_sub = [&](double to) {
    panels.push_back(Panel{
        [f, lo, hi](double t) {
          const double s = t * t;
          const double x = lo + s;
          return f(x, s, hi - x) * 2.0 * t;
        },
        0.0, std::sqrt(to - lo)});
  };
  auto plain = [&](double a, double b) {
    panels.push_back(Panel{
        [f, lo, hi, kInf](double x) {
          return f(x, std::isinf(lo) ? kInf : x - lo, hi - x);
        },
        a, b});
  };

  if (std::isinf(lo)) {
    // Near piece keeps the finite-endpoint treatment; far piece goes through
    // the rational map x = w - (1-u)/u onto (0,1].
    const double w = hi - std::max(2.0, std::abs(hi));
    if (upper_kind == EndpointKind::inverse_sqrt)
      upper_sub(w);
    else
      plain(w, hi);
    if (lower_kind == EndpointKind::inverse_sqrt) {
      // Density tail ~ |x|^{-3/2}: refine the map with u = t^2 so the mapped
      // integrand stays bounded at t -> 0.
      panels.push_back(Panel{
          [f, w, hi, kInf](double t) {
            const double t2 = t * t;
            const double x = w - (1.0 - t2) / t2;
            return f(x, kInf, hi - x) * 2.0 / (t2 * t);
          },
          0.0, 1.0});
    } else {
      panels.push_back(Panel{
          [f, w, hi, kInf](double u) {
            const double x = w - (1.0 - u) / u;
            return f(x, kInf, hi - x) / (u * u);
          },
          0.0, 1.0});
    }
    return panels;
  }

  if (!(hi > lo)) return panels;

  const bool sub_lo = lower_kind == EndpointKind::inverse_sqrt;
  const bool sub_hi = upper_kind == EndpointKind::inverse_sqrt;
  if (sub_lo && sub_hi) {
    const double mid = 0.5 * (lo + hi);
    lower_sub(mid);
    upper_sub(mid);
  } else if (sub_lo) {
    lower_sub(hi);
  } else if (sub_hi) {
    upper_sub(lo);
  } else {
    plain(lo, hi);
  }
  return panels;
}

std::vector<Panel> make_panels(const std::function<double(double)>& f,
                               double lo, double hi, EndpointKind lower_kind,
                               EndpointKind upper_kind) {
  return make_panels(
      [f](double x, double, double) { return f(x); }, lo, hi, lower_kind,
      upper_kind);
}

IntegralResult integrate_interval(const std::function<double(double)>& f,
                                  double a, double b, EndpointKind lower_kind,
                                  EndpointKind upper_kind,
                                  const QuadratureConfig& cfg) {
  return integrate_panels(make_panels(f, a, b, lower_kind, upper_kind), cfg);
}

}  // namespace csk
