#pragma once

#include <string>
#include <vector>

#include "csk/law.hpp"
#include "csk/quadrature.hpp"

namespace csk {

enum class Suite { transforms, family, iterate, extend, all };

Suite suite_from_string(const std::string& name);
std::string suite_to_string(Suite suite);

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string law_spec;
  std::vector<Check> checks;  // sorted by name
  long long wall_time_ms = 0;
  bool all_pass() const;
};

// Re-derives the identities of the requested suite numerically for one law.
// tol_scale multiplies every check tolerance (default 1).
VerificationReport run_verify(const Law& law, Suite suite,
                              double tol_scale = 1.0,
                              const QuadratureConfig& cfg = {});

}  // namespace csk
