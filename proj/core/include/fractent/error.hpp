#pragma once

#include <stdexcept>
#include <string>

namespace fractent {

/// Base of all library errors. Each subclass maps to a CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

/// Bad input: malformed config, out-of-range parameter, inconsistent sizes.
class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Request exceeds a configured size limit (sites, dense dimension).
class CapacityError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Solver failure, non-finite output, failed convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

}  // namespace fractent
