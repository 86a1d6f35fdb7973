#pragma once

#include <stdexcept>

namespace warmstandby {

/// Raised when an argument violates an operation's domain (nonpositive rate,
/// unsorted grid, inconsistent bounds).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot deliver a result within tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace warmstandby
