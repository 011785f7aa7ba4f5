#pragma once

#include <stdexcept>
#include <string>

namespace burgers {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation time outside [0, T*).
class TimeDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical procedure (root finder, adaptive quadrature) did not reach its
/// tolerance within the configured budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter recipe produced values too small to resolve in double precision.
class DegenerateParameterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A certified inequality failed. Carries the check name and its signed margin.
class CertificationError : public std::runtime_error {
 public:
  CertificationError(std::string check, double margin)
      : std::runtime_error("certification check '" + check +
                           "' failed with margin " + std::to_string(margin)),
        check_(std::move(check)),
        margin_(margin) {}

  const std::string& check() const noexcept { return check_; }
  double margin() const noexcept { return margin_; }

 private:
  std::string check_;
  double margin_;
};

}  // namespace burgers
