#pragma once

#include <stdexcept>
#include <string>

namespace qig {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch, malformed input, or a violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A value failed one of its type invariants (trace, positivity, unitarity, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Full rank was required but the state has eigenvalues below the support cutoff.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

/// The right logarithmic derivative does not exist: the tangent leaves the support.
class RldExistenceError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Classical family with p(x) = 0 but nonzero score at x.
class SingularFamilyError : public Error {
 public:
  using Error::Error;
};

class InvalidCandidateError : public Error {
 public:
  InvalidCandidateError(const std::string& what, double state_residual, double tangent_residual)
      : Error(what), state_residual_(state_residual), tangent_residual_(tangent_residual) {}
  double state_residual() const noexcept { return state_residual_; }
  double tangent_residual() const noexcept { return tangent_residual_; }

 private:
  double state_residual_;
  double tangent_residual_;
};

class NotReverseEstimableError : public Error {
 public:
  NotReverseEstimableError(const std::string& what, double max_commutator)
      : Error(what), max_commutator_(max_commutator) {}
  double max_commutator() const noexcept { return max_commutator_; }

 private:
  double max_commutator_;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double leakage) : Error(what), leakage_(leakage) {}
  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

}  // namespace qig
