// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "csk/errors.hpp"
#include "csk/extend.hpp"
#include "csk/family.hpp"
#include "csk/iterate.hpp"
#include "csk/law.hpp"
#include "csk/quadrature.hpp"
#include "csk/transforms.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
int g_failures = 0;

void report(int number, const std::string& name, bool pass, double residual,
            double tolerance) {
  std::printf("[%s] %02d %-24s residual %.3e  tol %.1e\n",
              pass ? "PASS" : "FAIL", number, name.c_str(), residual,
              tolerance);
  if (!pass) ++g_failures;
}

// Residual-style criterion: passes iff the worst residual meets tolerance.
void criterion(int number, const std::string& name, double tolerance,
               const std::function<double()>& worst_residual) {
  double residual = kInf;
  try {
    residual = worst_residual();
  } catch (const std::exception& e) {
    std::printf("       %02d threw: %s\n", number, e.what());
  }
  report(number, name, residual <= tolerance, residual, tolerance);
}

const std::vector<std::string>& laws() {
  static const std::vector<std::string> specs = {
      "semicircle", "mp:a=0.5", "free_abel",  "free_ressel",
      "arcsine",    "isc:p=1",  "bernoulli"};
  return specs;
}

std::vector<double> interior_grid(const csk::CskFamily& fam, int n) {
  const double hi = fam.m_plus();
  const double lo = std::isinf(fam.m0()) ? hi - 10.0 : fam.m0();
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * (i + 0.5) / n);
  return grid;
}

double endpoint_residual(double computed, double expected) {
  if (std::isinf(expected) || std::isinf(computed)) {
    return (std::isinf(expected) && std::isinf(computed) &&
            std::signbit(expected) == std::signbit(computed))
               ? 0.0
               : kInf;
  }
  return std::abs(computed - expected);
}

struct LawData {
  csk::Law law;
  csk::CskFamily family;
};

LawData make(const std::string& spec) {
  csk::Law law = csk::Law::from_spec(spec);
  csk::CskFamily fam = csk::build_family(law);
  return {law, fam};
}

}  // namespace

int main() {
  std::vector<LawData> cat;
  for (const std::string& spec : laws()) cat.push_back(make(spec));

  // 1. Catalog integrity: unit mass by quadrature, under 2 s total.
  {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const LawData& d : cat) {
      const double mass =
          csk::integrate([](double) { return 1.0; }, d.law.measure());
      worst = std::max(worst, std::abs(mass - 1.0));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool pass = worst <= 1e-7 && elapsed < 2.0;
    std::printf("       01 wall time %.3f s (< 2 s required)\n", elapsed);
    report(1, "catalog_mass", pass, worst, 1e-7);
  }

  // 2. Domain-of-means endpoints.
  criterion(2, "domain_endpoints", 1e-6, [&] {
    const double expected[][2] = {{0.0, 1.0},   {0.0, 1.0},  {-kInf, 0.0},
                                  {-kInf, -2.0}, {-kInf, -0.5}, {-kInf, -1.0},
                                  {-1.0, 1.0}};
    double worst = 0.0;
    for (std::size_t i = 0; i < cat.size(); ++i) {
      worst = std::max(worst,
                       endpoint_residual(cat[i].family.m0(), expected[i][0]));
      worst = std::max(
          worst, endpoint_residual(cat[i].family.m_plus(), expected[i][1]));
    }
    return worst;
  });

  // 3. Pseudo-variance inversion against the catalog closed forms.
  criterion(3, "pv_inversion", 1e-6, [&] {
    double worst = 0.0;
    for (const LawData& d : cat) {
      const csk::ClosedForms* cf = d.law.closed_forms();
      for (double m : interior_grid(d.family, 20)) {
        const double closed = cf->pseudo_variance(m);
        const double inverted = d.family.pseudo_variance_inverted(m);
        worst = std::max(worst,
                         std::abs(inverted - closed) / std::abs(closed));
      }
    }
    return worst;
  });

  // 4. Member contracts: mass, mean and (finite-mean laws) variance.
  criterion(4, "member_contracts", 1e-6, [&] {
    double worst = 0.0;
    for (const LawData& d : cat) {
      for (double m : interior_grid(d.family, 5)) {
        const csk::Measure q = d.family.member(m);
        worst = std::max(
            worst,
            std::abs(csk::integrate([](double) { return 1.0; }, q) - 1.0));
        worst = std::max(
            worst,
            std::abs(csk::integrate([](double x) { return x; }, q) - m));
        if (!std::isinf(d.family.mean())) {
          const double v = d.family.variance(m);
          worst = std::max(
              worst, std::abs(csk::integrate(
                                  [m](double x) { return (x - m) * (x - m); },
                                  q) -
                              v));
        }
      }
    }
    return worst;
  });

  // 5. Iterated families: domains and v1 against the per-law closed forms.
  criterion(5, "iteration_theorem", 1e-6, [&] {
    struct Case {
      const char* spec;
      double m1;
      double mbar_plus;
      std::function<double(double)> v1;
    };
    const std::vector<Case> cases = {
        {"semicircle", 0.5, 1.5,
         [](double mb) { return 1.0 + 0.25 - 0.5 * mb; }},
        {"mp:a=0.5", 0.5, 1.75,
         [](double mb) {
           return (1.0 + 0.5 * mb) * (1.0 + 0.5 * (0.5 + 0.5 - mb)) / 1.25;
         }},
        {"free_abel", -1.0, 0.0,
         [](double mb) {
           return mb * (1.0 - mb) * (mb - 1.0) / (mb + 1.0);
         }},
        {"free_ressel", -3.0, -1.5,
         [](double mb) {
           return mb * (mb + 1.0) * (9.0 - 6.0 - mb) / (mb + 3.0);
         }},
        {"arcsine", -1.0, 1.0 / 3.0,
         [](double mb) {
           return (1.0 + mb * mb) * (1.0 - 1.0 + 1.0 - mb) / (mb + 1.0);
         }},
        {"isc:p=1", -2.0, -2.0 / 3.0,
         [](double mb) {
           return mb * mb * (4.0 - 2.0 - mb) / (mb + 2.0);
         }},
    };
    double worst = 0.0;
    for (const Case& c : cases) {
      const LawData d = make(c.spec);
      const csk::IteratedFamily it = csk::iterate_family(d.family, c.m1);
      worst = std::max(worst, std::abs(it.mbar0() - c.m1));
      worst = std::max(worst, std::abs(it.mbar_plus() - c.mbar_plus));
      const double span = std::min(it.mbar_plus() - c.m1, 20.0);
      for (int i = 0; i < 10; ++i) {
        const double mb = it.mbar_plus() - span * (i + 0.5) / 10.0;
        const double closed = c.v1(mb);
        worst = std::max(worst, std::abs(it.variance(mb) - closed) /
                                    std::max(1.0, std::abs(closed)));
      }
    }
    return worst;
  });

  // 6. Second iteration of the semicircle through the raw-measure pipeline.
  criterion(6, "second_iteration", 1e-5, [&] {
    const double m1 = 0.3, m2 = 0.5;
    const csk::CskFamily base = csk::build_family(csk::Law::from_spec("semicircle"));
    const csk::Law rewrapped =
        csk::Law::from_measure(base.member(m1), "semicircle-Q0.3");
    const csk::CskFamily fam1 = csk::build_family(rewrapped);
    const csk::IteratedFamily it2 = csk::iterate_family(fam1, m2);
    double worst = 0.0;
    for (double mb : {0.6, 0.8, 1.0, 1.2, 1.4}) {
      const double closed = csk::semicircle_v2_closed(m1, m2, mb);
      worst = std::max(worst, std::abs(it2.variance(mb) - closed));
    }
    return worst;
  });

  // 7. Askey-Wilson product formula against the quadrature oracle.
  criterion(7, "askey_wilson", 1e-9, [&] {
    std::mt19937 rng(20260809u);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    csk::QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-15;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const double a[4] = {u(rng), u(rng), u(rng), u(rng)};
      auto f = [&a](double x) {
        double value = std::sqrt(4.0 - x * x);
        for (double ai : a) value /= 1.0 + ai * ai - ai * x;
        return value;
      };
      const csk::IntegralResult r = csk::integrate_interval(
          f, -2.0, 2.0, csk::EndpointKind::inverse_sqrt,
          csk::EndpointKind::inverse_sqrt, cfg);
      if (!r.converged) return kInf;
      const double k = csk::aw_integral(a[0], a[1], a[2], a[3]);
      worst = std::max(worst, std::abs(k - r.value) / std::abs(k));
    }
    return worst;
  });

  // 8. Extension bounds.
  criterion(8, "extension_bounds", 1e-6, [&] {
    double worst = 0.0;
    const struct {
      const char* spec;
      double m_plus_bold;
      double M_plus_bold;  // NaN = unchecked
    } rows[] = {
        {"semicircle", 1.0, kInf}, {"mp:a=0.5", 1.0, std::nan("")},
        {"arcsine", -0.5, std::nan("")}, {"isc:p=1", -0.5, kInf},
        {"free_ressel", -1.0, std::nan("")}, {"bernoulli", 1.0, 1.0},
    };
    for (const auto& row : rows) {
      const csk::ExtendedFamily ext =
          csk::build_extended(make(row.spec).family);
      worst = std::max(worst,
                       endpoint_residual(ext.m_plus_bold(), row.m_plus_bold));
      if (!std::isnan(row.M_plus_bold))
        worst = std::max(
            worst, endpoint_residual(ext.M_plus_bold(), row.M_plus_bold));
    }
    return worst;
  });

  // 9. Q-bar contracts across the three regimes.
  {
    double worst_contracts = 0.0;
    double worst_isc = 0.0;
    bool ok = true;
    try {
      const csk::ExtendedFamily sc =
          csk::build_extended(make("semicircle").family);
      for (double m : {0.5, 2.0, 5.0}) {
        const csk::ExtendedMember qb = sc.member(m);
        const double mass =
            csk::integrate([](double) { return 1.0; }, qb.ac_part) +
            qb.atom_weight;
        const double mean =
            csk::integrate([](double x) { return x; }, qb.ac_part) +
            qb.atom_weight * qb.atom_location;
        const double var =
            csk::integrate([m](double x) { return (x - m) * (x - m); },
                           qb.ac_part) +
            qb.atom_weight * (qb.atom_location - m) * (qb.atom_location - m);
        worst_contracts = std::max(worst_contracts, std::abs(mass - 1.0));
        worst_contracts = std::max(worst_contracts, std::abs(mean - m));
        worst_contracts = std::max(worst_contracts, std::abs(var - 1.0));
      }
      const csk::ExtendedFamily isc =
          csk::build_extended(make("isc:p=1").family);
      for (double m : {-2.0, -0.75, -0.25, 0.5, 2.0}) {
        const csk::ExtendedMember qb = isc.member(m);
        const double ac_mass =
            csk::integrate([](double) { return 1.0; }, qb.ac_part);
        const double mean =
            csk::integrate([](double x) { return x; }, qb.ac_part) +
            qb.atom_weight * qb.atom_location;
        worst_contracts =
            std::max(worst_contracts,
                     std::abs(ac_mass + qb.atom_weight - 1.0));
        worst_contracts = std::max(worst_contracts, std::abs(mean - m));
        if (m > -0.5) {
          const double expected_mass = m * m / ((1.0 + m) * (1.0 + m));
          const double expected_atom =
              std::max(0.0, 1.0 + 2.0 * m) / ((1.0 + m) * (1.0 + m));
          worst_isc = std::max(worst_isc, std::abs(ac_mass - expected_mass));
          worst_isc =
              std::max(worst_isc, std::abs(qb.atom_weight - expected_atom));
        }
      }
    } catch (const std::exception& e) {
      std::printf("       09 threw: %s\n", e.what());
      ok = false;
    }
    const bool pass = ok && worst_contracts <= 1e-6 && worst_isc <= 1e-7;
    report(9, "qbar_contracts", pass,
           std::max(worst_contracts, worst_isc * 10.0), 1e-6);
  }

  // 10. Companion mean maps against the closed forms.
  criterion(10, "companion_maps", 1e-8, [&] {
    double worst = 0.0;
    const csk::ExtendedFamily sc =
        csk::build_extended(make("semicircle").family);
    double prev = kInf;
    for (double m : {0.2, 0.5, 0.8}) {
      const double g = sc.companion(m);
      worst = std::max(worst, std::abs(g - 1.0 / m));
      if (g >= prev) return kInf;
      prev = g;
    }
    const csk::ExtendedFamily arc = csk::build_extended(make("arcsine").family);
    prev = kInf;
    for (double m : {-3.0, -2.0}) {
      const double g = arc.companion(m);
      worst = std::max(worst, std::abs(g - (-m - 1.0)));
      if (g >= prev) return kInf;
      prev = g;
    }
    const csk::ExtendedFamily res =
        csk::build_extended(make("free_ressel").family);
    prev = kInf;
    for (double m : {-4.0, -3.0}) {
      const double g = res.companion(m);
      worst = std::max(worst, std::abs(g - (-m - 2.0)));
      if (g >= prev) return kInf;
      prev = g;
    }
    return worst;
  });

  // 11. Free-power scaling of the second-extension bound.
  criterion(11, "free_power_scaling", 1e-8, [&] {
    const csk::ExtendedFamily bern =
        csk::build_extended(make("bernoulli").family);
    double worst = 0.0;
    for (double alpha : {1.5, 2.0, 4.0}) {
      worst = std::max(worst,
                       std::abs(bern.free_power_bound(alpha) - alpha));
    }
    return worst;
  });

  // 12. Negative control: the symmetric Bernoulli family cannot extend.
  {
    bool pass = false;
    try {
      const csk::ExtendedFamily bern =
          csk::build_extended(make("bernoulli").family);
      if (!bern.has_companions() &&
          bern.M_plus_bold() == bern.m_plus_bold()) {
        try {
          (void)bern.extended_pseudo_variance(1.2);
        } catch (const csk::NoExtensionError&) {
          pass = true;
        }
      }
    } catch (const std::exception& e) {
      std::printf("       12 threw: %s\n", e.what());
    }
    report(12, "no_extension_control", pass, pass ? 0.0 : kInf, 0.0);
  }

  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
