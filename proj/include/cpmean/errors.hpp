#pragma once

#include <stdexcept>
#include <string>

namespace cpmean {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes: validation errors -> 2, numeric failures -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericFailure : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotCompletelyPositive : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownExample : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonConvergence : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class NumericalError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

}  // namespace cpmean
