#pragma once

#include <stdexcept>
#include <string>

namespace ptl {

// Base of every error raised by the library. Anything deriving from
// ValidationError is a caller mistake (bad range, bad parameter); the rest
// are failures discovered while computing.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// lo < 2, hi <= lo, or a query outside a bitmap's interval.
class InvalidRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An argument outside the mathematical domain of an operation.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Fewer primes / samples / blocks than the operation needs.
class InsufficientDataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Model parameters that leave (almost) nothing to simulate.
class ModelParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// sigma == 0, so a standardized deviation is undefined.
class DegeneratePredictionError : public Error {
 public:
  using Error::Error;
};

class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptl
