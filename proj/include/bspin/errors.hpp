#pragma once

#include <stdexcept>
#include <string>

namespace bspin {

/// Input violates a documented domain (non-dominant point, wrong length, n < 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lattice point does not lie in the congruence class fixed by the tensor power.
class ParityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Request exceeds the sizes the exact (arbitrary precision) path is built for.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature did not reach the requested tolerance within its budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

}  // namespace bspin
