#pragma once

#include <stdexcept>
#include <string>

namespace mrs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (group specs, JSON documents).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Elements or arrays whose dimensions do not match their group or shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or exhaustive search was asked to go past its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A bounded search ran out of nodes or time. Never means "does not exist".
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// A constructor produced a set that failed the verifier gate.
class VerificationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace mrs
