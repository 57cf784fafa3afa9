#pragma once

#include <stdexcept>
#include <string>

namespace memcap {

// Input or configuration that violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Evaluation at a point where a closed form is singular.
class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A rate that coincides with a capacity threshold; the caller must perturb it.
class IndeterminateRateError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A requested computation would exceed the configured work budget.
class ResourceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Non-finite values, failed convergence, or a missing sign change.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace memcap
