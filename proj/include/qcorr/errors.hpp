#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, non-physical states, out-of-range parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Shape or subsystem-signature mismatch between operands.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Input is well-formed but outside what an algorithm supports (e.g. a
/// measured subsystem that is not a qubit).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or syntactically broken input files and arguments.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcorr
