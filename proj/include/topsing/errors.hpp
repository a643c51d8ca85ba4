#pragma once

#include <stdexcept>
#include <string>

namespace topsing {

/// Caller supplied inconsistent or malformed input (exit status 2 in the CLI).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A monomial exponent left the supported range.
class ExponentOverflow : public UsageError {
 public:
  using UsageError::UsageError;
};

/// An internal postcondition or a caller-declared invariant did not hold.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A Groebner computation exceeded its configured pair or degree budget.
/// Raised instead of returning a possibly wrong answer (exit status 3).
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The cubic residual is not regular of order 3 in its first variable.
class NeedsRotation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topsing
