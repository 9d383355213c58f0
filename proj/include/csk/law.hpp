#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csk/measure.hpp"

namespace csk {

enum class LawName {
  semicircle,
  marchenko_pastur,
  free_abel,
  free_ressel,
  free_strict_arcsine,
  inverse_semicircle,
  bernoulli_symmetric,
  custom,
};

std::string law_name_string(LawName name);

// Closed-form attachments for catalog laws. pseudo_variance is the analytic
// continuation usable on (m0, +inf); pv_over_m avoids the removable 0/0 at
// m = 0 where the ratio extends to a polynomial.
struct ClosedForms {
  std::function<double(double)> pseudo_variance;
  std::function<double(double)> pv_over_m;
  std::function<double(double)> pv_derivative;
  std::function<double(double)> variance;          // null when the mean is -inf
  std::function<double(double)> cauchy_transform;  // G(z) for z > A; may be null
  std::string pv_text;
};

class Law {
 public:
  // Spec grammar: name(:key=value(,key=value)*)?. Names: semicircle,
  // mp|marchenko_pastur, free_abel, free_ressel, arcsine|free_strict_arcsine,
  // isc|inverse_semicircle, bernoulli.
  static Law from_spec(std::string_view spec);

  // Wraps a raw measure as a law without closed forms (used to re-generate
  // families from tilted members).
  static Law from_measure(Measure measure, std::string label = "custom");

  LawName name() const { return name_; }
  const std::string& spec_string() const { return spec_; }
  const std::map<std::string, double>& parameters() const { return params_; }
  const Measure& measure() const { return measure_; }
  const ClosedForms* closed_forms() const {
    return closed_ ? &*closed_ : nullptr;
  }

  // Lower end of the kernel parameter range. 0 for one-sided families; the
  // symmetric Bernoulli law carries 1/inf supp = -1 so the family realizes
  // the full two-sided domain of means (-1, 1).
  double theta_lower() const { return theta_lower_; }
  bool two_sided() const { return theta_lower_ < 0.0; }

 private:
  LawName name_ = LawName::custom;
  std::string spec_;
  std::map<std::string, double> params_;
  Measure measure_;
  std::optional<ClosedForms> closed_;
  double theta_lower_ = 0.0;
};

struct SupportBounds {
  double A = 0.0;          // sup supp(nu)
  double B = 0.0;          // max(0, A)
  double theta_plus = 0.0; // 1/B, +inf when B = 0
};

SupportBounds support_bounds(const Law& law);

double evaluate_density(const Measure& mu, double x);

struct CatalogEntry {
  std::string name;
  std::vector<std::string> aliases;
  std::string parameter_help;
  std::string pv_text;
  std::string domain_text;  // one-sided domain of means
  bool can_carry_atoms = false;
};

const std::vector<CatalogEntry>& catalog();

}  // namespace csk
