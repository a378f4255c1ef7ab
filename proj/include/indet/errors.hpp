#pragma once

#include <stdexcept>
#include <string>

namespace indet {

/// Base of every error raised by the library. Messages name the violated invariant.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shape, negative probability, mass not summing to one.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// p*min(mu) + q*min(nu) < 1, so the indetermination closed form has a negative cell.
class ConditionHViolation : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but the requested quantity is undefined on it.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class SizeExceeded : public Error {
 public:
  using Error::Error;
};

class OutOfSupport : public Error {
 public:
  using Error::Error;
};

/// An internal post-condition failed. Always a bug, never a user error.
class ToleranceBreach : public Error {
 public:
  using Error::Error;
};

}  // namespace indet
