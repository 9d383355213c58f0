#pragma once

#include <stdexcept>
#include <string>

namespace csk {

// Bad law spec string, bad parameter, bad grid: user input problems.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation (z <= A, m outside
// the domain of means, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Numerical machinery failed to reach its target: carries the residual that
// was actually achieved.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_residual)
      : std::runtime_error(what + " (achieved residual " +
                           std::to_string(achieved_residual) + ")"),
        residual_(achieved_residual) {}

  double achieved_residual() const { return residual_; }

 private:
  double residual_;
};

// Requested an extension/companion that does not exist for this family.
class NoExtensionError : public std::runtime_error {
 public:
  explicit NoExtensionError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace csk
