#pragma once

#include <stdexcept>
#include <string>

namespace hsh4 {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Series did not reach the requested tolerance within its term budget.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Multipole series requested in its divergent regime (r1 >= r2, non-terminating).
class DivergentExpansion : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Index tuple that violates projection or range invariants.
class InvalidIndex : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hsh4
