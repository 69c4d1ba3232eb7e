#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace esscorr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the documented contract.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument lies outside the validity domain of an analytic formula.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A computation could not meet its numerical post-condition.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Non-fatal diagnostic attached to a result.
struct Warning {
  std::string code;
  std::string message;
};

using Warnings = std::vector<Warning>;

inline void emit(Warnings* sink, std::string code, std::string message) {
  if (sink != nullptr) {
    sink->push_back({std::move(code), std::move(message)});
  }
}

}  // namespace esscorr
