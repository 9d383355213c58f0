#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "csk/errors.hpp"
#include "csk/extend.hpp"
#include "csk/family.hpp"
#include "csk/iterate.hpp"
#include "csk/law.hpp"
#include "csk/tables.hpp"
#include "csk/transforms.hpp"
#include "csk/verify.hpp"

namespace {

using csk::format_number;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
  double rel_tol = 1e-10;
  int max_subdiv = 2000;
  std::string format = "csv";
  bool json_flag = false;

  csk::QuadratureConfig quad() const {
    csk::QuadratureConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.max_subdivisions = max_subdiv;
    return cfg;
  }
  bool json() const { return json_flag || format == "json"; }
};

void add_common(CLI::App* cmd, CommonOptions* opt) {
  cmd->add_option("--rel-tol", opt->rel_tol,
                  "quadrature relative tolerance (env CSK_QUAD_RELTOL)");
  cmd->add_option("--max-subdiv", opt->max_subdiv,
                  "quadrature subdivision budget");
  cmd->add_option("--format", opt->format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--json", opt->json_flag, "alias for --format json");
}

std::string bound_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_number(v);
}

int cmd_laws(const CommonOptions& opt, const std::string& filter) {
  nlohmann::json arr = nlohmann::json::array();
  for (const csk::CatalogEntry& e : csk::catalog()) {
    if (!filter.empty()) {
      if (filter == "atom") {
        if (!e.can_carry_atoms) continue;
      } else if (e.name.find(filter) == std::string::npos) {
        continue;
      }
    }
    if (opt.json()) {
      nlohmann::json obj;
      obj["name"] = e.name;
      obj["aliases"] = e.aliases;
      obj["params"] = e.parameter_help;
      obj["domain"] = e.domain_text;
      obj["pseudo_variance"] = e.pv_text;
      obj["can_carry_atoms"] = e.can_carry_atoms;
      arr.push_back(obj);
    } else {
      std::cout << e.name;
      for (const auto& a : e.aliases) std::cout << " (" << a << ")";
      if (!e.parameter_help.empty())
        std::cout << "  params: " << e.parameter_help;
      std::cout << "  V(m) = " << e.pv_text << "  domain " << e.domain_text
                << (e.can_carry_atoms ? "  [atoms]" : "") << "\n";
    }
  }
  if (opt.json()) std::cout << arr.dump(2) << "\n";
  return kExitPass;
}

int cmd_describe(const CommonOptions& opt, const std::string& law_spec) {
  const csk::Law law = csk::Law::from_spec(law_spec);
  const csk::CskFamily fam = csk::build_family(law, opt.quad());
  const csk::ExtendedFamily ext = csk::build_extended(fam);
  const csk::SupportBounds sb = csk::support_bounds(law);

  std::optional<std::string> route_warning;
  if (!std::isnan(ext.m_plus_bold_theta_route()) &&
      std::abs(ext.m_plus_bold_theta_route() - ext.m_plus_bold()) > 1e-6) {
    route_warning =
        "first-extension bound: analytic route " +
        bound_string(ext.m_plus_bold()) + " vs theta-limit route " +
        bound_string(ext.m_plus_bold_theta_route());
  }

  if (opt.json()) {
    auto bound = [](double v) {
      return std::isinf(v) ? nlohmann::json(v > 0 ? "inf" : "-inf")
                           : nlohmann::json(v);
    };
    nlohmann::json obj;
    obj["law"] = law_spec;
    obj["A"] = sb.A;
    obj["B"] = sb.B;
    obj["theta_plus"] = bound(sb.theta_plus);
    obj["m0"] = bound(fam.m0());
    obj["m_plus"] = bound(fam.m_plus());
    obj["m_plus_bold"] = bound(ext.m_plus_bold());
    obj["M_plus_bold"] = bound(ext.M_plus_bold());
    if (const csk::ClosedForms* cf = law.closed_forms())
      obj["pseudo_variance"] = cf->pv_text;
    if (route_warning) obj["warning"] = *route_warning;
    std::cout << obj.dump(2) << "\n";
  } else {
    std::cout << "law          " << law_spec << "\n";
    std::cout << "A            " << bound_string(sb.A) << "\n";
    std::cout << "B            " << bound_string(sb.B) << "\n";
    std::cout << "theta_plus   " << bound_string(sb.theta_plus) << "\n";
    std::cout << "m0           " << bound_string(fam.m0()) << "\n";
    std::cout << "m_plus       " << bound_string(fam.m_plus()) << "\n";
    std::cout << "m_plus_bold  " << bound_string(ext.m_plus_bold()) << "\n";
    std::cout << "M_plus_bold  " << bound_string(ext.M_plus_bold()) << "\n";
    if (const csk::ClosedForms* cf = law.closed_forms())
      std::cout << "V(m)         " << cf->pv_text << "\n";
    if (route_warning) std::cout << "warning      " << *route_warning << "\n";
  }
  return kExitPass;
}

int cmd_table(const CommonOptions& opt, const csk::TableRequest& request) {
  const csk::Table table = csk::make_table(request, opt.quad());
  if (opt.json())
    csk::write_json(table, std::cout);
  else
    csk::write_csv(table, std::cout);
  return kExitPass;
}

int run_one_verify(const CommonOptions& opt, const std::string& law_spec,
                   csk::Suite suite, double tol_scale, bool* all_pass) {
  const csk::Law law = csk::Law::from_spec(law_spec);
  const csk::VerificationReport report =
      csk::run_verify(law, suite, tol_scale, opt.quad());
  *all_pass = *all_pass && report.all_pass();
  if (opt.json()) {
    nlohmann::json obj;
    obj["law_spec"] = report.law_spec;
    obj["wall_time_ms"] = report.wall_time_ms;
    nlohmann::json checks = nlohmann::json::array();
    for (const csk::Check& c : report.checks) {
      nlohmann::json jc;
      jc["name"] = c.name;
      jc["residual"] = std::isfinite(c.residual) ? nlohmann::json(c.residual)
                                                 : nlohmann::json();
      jc["tolerance"] = c.tolerance;
      jc["status"] = c.pass ? "pass" : "fail";
      checks.push_back(jc);
    }
    obj["checks"] = checks;
    std::cout << obj.dump(2) << "\n";
  } else {
    std::cout << "verify " << report.law_spec << " ("
              << report.wall_time_ms << " ms)\n";
    char row[160];
    for (const csk::Check& c : report.checks) {
      std::snprintf(row, sizeof(row), "  [%s] %-42s residual %-12.4g tol %.2g",
                    c.pass ? "pass" : "FAIL", c.name.c_str(), c.residual,
                    c.tolerance);
      std::cout << row << "\n";
    }
  }
  return kExitPass;
}

int cmd_verify(const CommonOptions& opt, const std::string& law_spec,
               const std::string& suite_name, double tol_scale) {
  const csk::Suite suite = csk::suite_from_string(suite_name);
  bool all_pass = true;
  if (law_spec == "all") {
    for (const char* spec :
         {"semicircle", "mp:a=0.5", "free_abel", "free_ressel", "arcsine",
          "isc:p=1", "bernoulli"}) {
      run_one_verify(opt, spec, suite, tol_scale, &all_pass);
    }
  } else {
    run_one_verify(opt, law_spec, suite, tol_scale, &all_pass);
  }
  return all_pass ? kExitPass : kExitVerifyFail;
}

int cmd_iterate(const CommonOptions& opt, const std::string& law_spec,
                double m1, bool domain, std::optional<double> mbar,
                const std::string& quantity, const std::string& grid) {
  if (domain || mbar) {
    const csk::Law law = csk::Law::from_spec(law_spec);
    const csk::CskFamily fam = csk::build_family(law, opt.quad());
    const csk::IteratedFamily it = csk::iterate_family(fam, m1);
    if (domain) {
      if (opt.json()) {
        nlohmann::json obj;
        obj["law"] = law_spec;
        obj["m1"] = m1;
        obj["mbar0"] = it.mbar0();
        obj["mbar_plus"] = it.mbar_plus();
        std::cout << obj.dump(2) << "\n";
      } else {
        std::cout << "domain (" << format_number(it.mbar0()) << ", "
                  << format_number(it.mbar_plus()) << ")\n";
      }
    }
    if (mbar) {
      const double m = it.mean_map_inverse(*mbar);
      const double pv1 = it.pseudo_variance(*mbar);
      const double v1 = it.variance(*mbar);
      if (opt.json()) {
        nlohmann::json obj;
        obj["mbar"] = *mbar;
        obj["m"] = m;
        obj["pv1"] = pv1;
        obj["v1"] = v1;
        std::cout << obj.dump(2) << "\n";
      } else {
        std::cout << "mbar " << format_number(*mbar) << "  m "
                  << format_number(m) << "  pv1 " << format_number(pv1)
                  << "  v1 " << format_number(v1) << "\n";
      }
    }
  }
  if (!quantity.empty()) {
    if (grid.empty()) throw csk::UsageError("--quantity needs --grid");
    csk::TableRequest request;
    request.law_spec = law_spec;
    request.quantity = csk::quantity_from_string(quantity);
    if (request.quantity != csk::Quantity::v1 &&
        request.quantity != csk::Quantity::mean_map)
      throw csk::UsageError("iterate emits v1 or mean_map tables");
    request.grid = csk::Grid::parse(grid);
    request.m1 = m1;
    return cmd_table(opt, request);
  }
  if (!domain && !mbar && quantity.empty())
    throw csk::UsageError("iterate needs --domain, --mbar and/or --quantity");
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cauchy-Stieltjes kernel families: transforms, domains of "
               "means, variance functions, iteration and extensions"};
  app.require_subcommand(1);

  CommonOptions opt;
  if (const char* env = std::getenv("CSK_QUAD_RELTOL")) {
    try {
      opt.rel_tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "bad CSK_QUAD_RELTOL value '" << env << "'\n";
      return kExitUsage;
    }
  }

  std::string law_spec;
  std::string filter;
  std::string suite_name = "all";
  std::string quantity;
  std::string grid_text;
  double tol_scale = 1.0;
  double m_value = 0.0;
  double m1_value = 0.0;
  double mbar_value = 0.0;
  bool has_m = false;
  bool has_m1 = false;
  bool domain_flag = false;

  CLI::App* laws = app.add_subcommand("laws", "list the law catalog");
  laws->add_option("--filter", filter, "substring filter; 'atom' keeps "
                                       "atom-capable laws");
  add_common(laws, &opt);

  CLI::App* describe =
      app.add_subcommand("describe", "support, domain and extension bounds");
  describe->add_option("--law", law_spec, "law spec")->required();
  add_common(describe, &opt);

  CLI::App* table = app.add_subcommand("table", "tabulate a quantity");
  table->add_option("--law", law_spec, "law spec")->required();
  table->add_option("--quantity", quantity,
                    "density|member_density|pv|variance|mean_map|v1|"
                    "atom_weight")
      ->required();
  table->add_option("--grid", grid_text, "start:step:stop")->required();
  table->add_option("--m", m_value, "member mean");
  table->add_option("--m1", m1_value, "iteration base mean");
  add_common(table, &opt);

  CLI::App* verify =
      app.add_subcommand("verify", "re-derive identities numerically");
  verify->add_option("--law", law_spec, "law spec, or 'all'")->required();
  verify->add_option("--suite", suite_name,
                     "transforms|family|iterate|extend|all");
  verify->add_option("--tol", tol_scale, "tolerance scale factor");
  add_common(verify, &opt);

  CLI::App* iterate =
      app.add_subcommand("iterate", "iterated family domain and tables");
  iterate->add_option("--law", law_spec, "law spec")->required();
  iterate->add_option("--m1", m1_value, "base member mean")->required();
  iterate->add_flag("--domain", domain_flag, "print the iterated domain");
  iterate->add_option("--mbar", mbar_value,
                      "evaluate m, V1 and v1 at this iterated mean");
  iterate->add_option("--quantity", quantity, "v1|mean_map");
  iterate->add_option("--grid", grid_text, "start:step:stop");
  add_common(iterate, &opt);

  try {
    app.parse(argc, argv);
    has_m = table->count("--m") > 0;
    has_m1 = table->count("--m1") > 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (laws->parsed()) return cmd_laws(opt, filter);
    if (describe->parsed()) return cmd_describe(opt, law_spec);
    if (table->parsed()) {
      csk::TableRequest request;
      request.law_spec = law_spec;
      request.quantity = csk::quantity_from_string(quantity);
      request.grid = csk::Grid::parse(grid_text);
      if (has_m) request.m = m_value;
      if (has_m1) request.m1 = m1_value;
      return cmd_table(opt, request);
    }
    if (verify->parsed())
      return cmd_verify(opt, law_spec, suite_name, tol_scale);
    if (iterate->parsed()) {
      std::optional<double> mbar;
      if (iterate->count("--mbar") > 0) mbar = mbar_value;
      return cmd_iterate(opt, law_spec, m1_value, domain_flag, mbar, quantity,
                         grid_text);
    }
  } catch (const csk::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const csk::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const csk::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const csk::NoExtensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
