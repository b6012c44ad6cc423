#pragma once

#include <stdexcept>
#include <string>

namespace scr {

// Base class for all library errors. The CLI maps the three branches below
// onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated preconditions: bad sizes, invalid arguments, combinatorial guards.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class GuardError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Numerical failures: rank deficiency, degenerate columns, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DependentColumnsError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateColumnError : public NumericalError {
 public:
  DegenerateColumnError(const std::string& msg, long column)
      : NumericalError(msg), column_(column) {}
  long column() const { return column_; }

 private:
  long column_;
};

class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotFoundError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scr
