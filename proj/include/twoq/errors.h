#pragma once

#include <stdexcept>
#include <string>

namespace twoq {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied parameter (sizes, k, modes, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind { kSchema, kNegativeValue, kDimensionMismatch };

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  ParseErrorKind kind() const { return kind_; }

 private:
  ParseErrorKind kind_;
};

// Subgraph references nodes outside the instance, or carries self-loops or
// duplicate edges.
class MalformedSubgraphError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Alternative queried or compared outside an agent's relevant set.
class InvalidAlternativeError : public Error {
 public:
  using Error::Error;
};

// Serial dictatorship ran out of copies for some agent.
class InfeasibleCopiesError : public Error {
 public:
  using Error::Error;
};

// Input exceeds the hard size guard of an exponential routine.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class ExtensionError : public Error {
 public:
  using Error::Error;
};

class DegreeViolationError : public Error {
 public:
  using Error::Error;
};

// Per-agent query budget exhausted. Mechanisms treat this as unreachable.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// Adversarial completion cannot bound an agent's values from above.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace twoq
