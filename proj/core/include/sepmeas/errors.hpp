#pragma once

#include <stdexcept>
#include <string>

namespace sepmeas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's precondition
/// (non-prime N, mismatched dimensions, malformed file, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A weight choice leaves the failure operator with a negative eigenvalue.
class NotPsdError : public InputError {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : InputError(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// An iterative kernel hit its iteration cap or a factorization broke down.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A post-condition that must hold for valid inputs did not. Always a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace sepmeas
