#include "csk/law.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "csk/errors.hpp"

namespace csk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::map<std::string, double> parse_params(std::string_view text,
                                            const std::string& spec) {
  std::map<std::string, double> params;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item =
        text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                         : comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 >= item.size())
      throw UsageError("malformed law spec '" + spec +
                       "': parameters must be key=value");
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    std::size_t consumed = 0;
    double parsed = 0.0;
    try {
      parsed = std::stod(value, &consumed);
    } catch (const std::exception&) {
      throw UsageError("malformed law spec '" + spec + "': bad value for '" +
                       key + "'");
    }
    if (consumed != value.size())
      throw UsageError("malformed law spec '" + spec + "': bad value for '" +
                       key + "'");
    if (!params.emplace(key, parsed).second)
      throw UsageError("malformed law spec '" + spec + "': duplicate key '" +
                       key + "'");
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return params;
}

void require_keys(const std::map<std::string, double>& params,
                  const std::vector<std::string>& allowed,
                  const std::string& spec) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok)
      throw UsageError("law spec '" + spec + "': unknown parameter '" + key +
                       "'");
  }
}

}  // namespace

Law Law::from_measure(Measure measure, std::string label) {
  Law law;
  law.name_ = LawName::custom;
  law.spec_ = std::move(label);
  law.measure_ = std::move(measure);
  return law;
}

Law Law::from_spec(std::string_view spec_in) {
  const std::string spec(spec_in);
  if (spec.empty()) throw UsageError("empty law spec");
  const std::size_t colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos)
    params = parse_params(std::string_view(spec).substr(colon + 1), spec);

  Law law;
  law.spec_ = spec;
  law.params_ = params;

  if (name == "semicircle") {
    require_keys(params, {}, spec);
    law.name_ = LawName::semicircle;
    law.measure_ = Measure::absolutely_continuous(
        [](double, double s_lo, double s_hi) {
          return std::sqrt(s_lo * s_hi) / (2.0 * kPi);
        },
        AcSupport{-2.0, 2.0, EndpointKind::inverse_sqrt,
                  EndpointKind::inverse_sqrt});
    ClosedForms cf;
    cf.pseudo_variance = [](double) { return 1.0; };
    cf.pv_over_m = [](double m) { return 1.0 / m; };
    cf.pv_derivative = [](double) { return 0.0; };
    cf.variance = [](double) { return 1.0; };
    cf.cauchy_transform = [](double z) {
      return 0.5 * (z - std::sqrt(z * z - 4.0));
    };
    cf.pv_text = "1";
    law.closed_ = std::move(cf);
    return law;
  }

  if (name == "mp" || name == "marchenko_pastur") {
    require_keys(params, {"a"}, spec);
    auto it = params.find("a");
    if (it == params.end())
      throw UsageError("law spec '" + spec + "': marchenko_pastur needs a");
    const double a = it->second;
    if (a == 1.0 || a == -1.0)
      throw UsageError("law spec '" + spec +
                       "': a = +-1 sits on the atom-appearance threshold and "
                       "is rejected");
    law.name_ = LawName::marchenko_pastur;
    auto density = [a](double x, double s_lo, double s_hi) {
      return std::sqrt(s_lo * s_hi) / (2.0 * kPi * (1.0 + a * x));
    };
    AcSupport support{a - 2.0, a + 2.0, EndpointKind::inverse_sqrt,
                      EndpointKind::inverse_sqrt};
    if (a * a > 1.0) {
      law.measure_ = Measure::mixed(density, support,
                                    {Atom{-1.0 / a, 1.0 - 1.0 / (a * a)}});
    } else {
      law.measure_ = Measure::absolutely_continuous(density, support);
    }
    ClosedForms cf;
    cf.pseudo_variance = [a](double m) { return 1.0 + a * m; };
    cf.pv_over_m = [a](double m) { return (1.0 + a * m) / m; };
    cf.pv_derivative = [a](double) { return a; };
    cf.variance = [a](double m) { return 1.0 + a * m; };
    cf.cauchy_transform = [a](double z) {
      const double u = z - a;
      const double mhat = 0.5 * (u - std::sqrt(u * u - 4.0));
      return mhat / (1.0 + a * mhat);
    };
    {
      std::ostringstream text;
      text << "1 + (" << a << ")*m";
      cf.pv_text = text.str();
    }
    law.closed_ = std::move(cf);
    return law;
  }

  if (name == "free_abel") {
    require_keys(params, {}, spec);
    law.name_ = LawName::free_abel;
    law.measure_ = Measure::absolutely_continuous(
        [](double x, double, double s_hi) {
          return 1.0 / (kPi * (1.0 - x) * std::sqrt(s_hi));
        },
        AcSupport{-kInf, 0.0, EndpointKind::inverse_sqrt,
                  EndpointKind::inverse_sqrt});
    ClosedForms cf;
    cf.pseudo_variance = [](double m) { return m * m * (m - 1.0); };
    cf.pv_over_m = [](double m) { return m * (m - 1.0); };
    cf.pv_derivative = [](double m) { return 3.0 * m * m - 2.0 * m; };
    cf.cauchy_transform = [](double z) {
      return 1.0 / (z + std::sqrt(z));
    };
    cf.pv_text = "m^2*(m - 1)";
    law.closed_ = std::move(cf);
    return law;
  }

  if (name == "free_ressel") {
    require_keys(params, {}, spec);
    law.name_ = LawName::free_ressel;
    law.measure_ = Measure::absolutely_continuous(
        [](double x, double, double s_hi) {
          return -1.0 / (kPi * x * std::sqrt(s_hi));
        },
        AcSupport{-kInf, -1.0, EndpointKind::inverse_sqrt,
                  EndpointKind::inverse_sqrt});
    ClosedForms cf;
    cf.pseudo_variance = [](double m) { return m * m * (m + 1.0); };
    cf.pv_over_m = [](double m) { return m * (m + 1.0); };
    cf.pv_derivative = [](double m) { return 3.0 * m * m + 2.0 * m; };
    cf.cauchy_transform = [](double z) {
      const double s = std::sqrt(1.0 + z);
      return 1.0 / (s * (1.0 + s));
    };
    cf.pv_text = "m^2*(m + 1)";
    law.closed_ = std::move(cf);
    return law;
  }

  if (name == "arcsine" || name == "free_strict_arcsine") {
    require_keys(params, {}, spec);
    law.name_ = LawName::free_strict_arcsine;
    law.measure_ = Measure::absolutely_continuous(
        [](double x, double, double s_hi) {
          return std::sqrt(s_hi) / (kPi * (1.0 + x * x));
        },
        AcSupport{-kInf, 0.75, EndpointKind::inverse_sqrt,
                  EndpointKind::inverse_sqrt});
    ClosedForms cf;
    cf.pseudo_variance = [](double m) { return m * (1.0 + m * m); };
    cf.pv_over_m = [](double m) { return 1.0 + m * m; };
    cf.pv_derivative = [](double m) { return 1.0 + 3.0 * m * m; };
    cf.cauchy_transform = [](double z) {
      const double mhat = -0.5 * (1.0 + std::sqrt(4.0 * z - 3.0));
      return 1.0 / (1.0 + mhat * mhat);
    };
    cf.pv_text = "m*(1 + m^2)";
    law.closed_ = std::move(cf);
    return law;
  }

  if (name == "isc" || name == "inverse_semicircle") {
    require_keys(params, {"p"}, spec);
    double p = 1.0;
    if (auto it = params.find("p"); it != params.end()) p = it->second;
    if (!(p > 0.0))
      throw UsageError("law spec '" + spec + "': inverse_semicircle needs p > 0");
    law.params_["p"] = p;
    law.name_ = LawName::inverse_semicircle;
    const double p2 = p * p;
    law.measure_ = Measure::absolutely_continuous(
        [p](double x, double, double s_hi) {
          return p * std::sqrt(s_hi) / (kPi * x * x);
        },
        AcSupport{-kInf, -p2 / 4.0, EndpointKind::inverse_sqrt,
                  EndpointKind::inverse_sqrt});
    ClosedForms cf;
    cf.pseudo_variance = [p2](double m) { return m * m * m / p2; };
    cf.pv_over_m = [p2](double m) { return m * m / p2; };
    cf.pv_derivative = [p2](double m) { return 3.0 * m * m / p2; };
    cf.cauchy_transform = [p, p2](double z) {
      const double mhat = -0.5 * (p2 + p * std::sqrt(p2 + 4.0 * z));
      return p2 / (mhat * mhat);
    };
    if (p == 1.0) {
      cf.pv_text = "m^3";
    } else {
      std::ostringstream text;
      text << "m^3/" << p2;
      cf.pv_text = text.str();
    }
    law.closed_ = std::move(cf);
    return law;
  }

  if (name == "bernoulli") {
    require_keys(params, {}, spec);
    law.name_ = LawName::bernoulli_symmetric;
    law.measure_ = Measure::atomic({Atom{-1.0, 0.5}, Atom{1.0, 0.5}});
    law.theta_lower_ = -1.0;  // 1/inf supp: two-sided kernel range
    ClosedForms cf;
    cf.pseudo_variance = [](double m) { return 1.0 - m * m; };
    cf.pv_over_m = [](double m) { return (1.0 - m * m) / m; };
    cf.pv_derivative = [](double m) { return -2.0 * m; };
    cf.variance = [](double m) { return 1.0 - m * m; };
    cf.cauchy_transform = [](double z) { return z / (z * z - 1.0); };
    cf.pv_text = "1 - m^2";
    law.closed_ = std::move(cf);
    return law;
  }

  throw UsageError("unknown law name '" + name + "'");
}

std::string law_name_string(LawName name) {
  switch (name) {
    case LawName::semicircle: return "semicircle";
    case LawName::marchenko_pastur: return "marchenko_pastur";
    case LawName::free_abel: return "free_abel";
    case LawName::free_ressel: return "free_ressel";
    case LawName::free_strict_arcsine: return "free_strict_arcsine";
    case LawName::inverse_semicircle: return "inverse_semicircle";
    case LawName::bernoulli_symmetric: return "bernoulli_symmetric";
    case LawName::custom: return "custom";
  }
  return "custom";
}

SupportBounds support_bounds(const Law& law) {
  SupportBounds b;
  b.A = law.measure().sup_support();
  b.B = std::max(0.0, b.A);
  b.theta_plus = b.B > 0.0 ? 1.0 / b.B : kInf;
  return b;
}

double evaluate_density(const Measure& mu, double x) { return mu.density(x); }

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"semicircle", {}, "", "1", "(0, 1)", false},
      {"marchenko_pastur", {"mp"},
       "a (real, a != +-1; a=0 degenerates to semicircle)", "1 + a*m",
       "(0, 1) for a > -1; (0, -1/a) for a < -1", true},
      {"free_abel", {}, "", "m^2*(m - 1)", "(-inf, 0)", false},
      {"free_ressel", {}, "", "m^2*(m + 1)", "(-inf, -2)", false},
      {"free_strict_arcsine", {"arcsine"}, "", "m*(1 + m^2)", "(-inf, -1/2)",
       false},
      {"inverse_semicircle", {"isc"}, "p (real > 0, default 1)", "m^3/p^2",
       "(-inf, -p^2)", false},
      {"bernoulli", {}, "", "1 - m^2", "(-1, 1)", true},
  };
  return entries;
}

}  // namespace csk
