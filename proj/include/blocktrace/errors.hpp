#pragma once

#include <stdexcept>
#include <string>

namespace blocktrace {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or index mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input outside an operation's mathematical domain
// (non-Hermitian where Hermitian is required, indefinite where PSD is
// required, invalid scalar parameter, non-finite entries).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative kernel failed to reach its convergence target.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

// A checker was handed an instance that violates its hypothesis.
// Distinct from an inequality violation: a failed precondition is never
// counted as a counterexample.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// An instance generator could not produce a member of its class.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// File or serialization failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or command-line usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace blocktrace
