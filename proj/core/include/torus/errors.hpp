#pragma once

#include <stdexcept>
#include <string>

namespace torus {

// Raised when an argument lies outside the mathematical domain of an
// operation (a <= 1, Bose mu >= 0, negative rho, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised when an iterative or adaptive procedure fails to reach its target.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, double achieved_error = 0.0)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

// A quadrature result violated a structural property it must satisfy
// (e.g. a matrix element of a hermitian operator came out complex).
class ConsistencyError : public NumericError {
 public:
  ConsistencyError(const std::string& what, double residual)
      : NumericError(what, residual) {}
};

}  // namespace torus
