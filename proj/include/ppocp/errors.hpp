#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ppocp {

/// Base class of every error raised by the solvers.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Two characterizations of the same mathematical predicate disagree.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class SimplexViolation : public Error {
 public:
  using Error::Error;
};

class NegativeDualVariable : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class PivotLimitExceeded : public Error {
 public:
  using Error::Error;
};

class InconsistentOutcome : public Error {
 public:
  using Error::Error;
};

class OracleScaleExceeded : public Error {
 public:
  using Error::Error;
};

/// Non-generic catch target for solver non-convergence.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Iteration budget exhausted. Carries the best iterate found so far.
template <typename Iterate>
class MaxIterExceeded : public NonConvergence {
 public:
  MaxIterExceeded(const std::string& what, Iterate best)
      : NonConvergence(what), best_(std::move(best)) {}

  const Iterate& best() const noexcept { return best_; }

 private:
  Iterate best_;
};

}  // namespace ppocp
