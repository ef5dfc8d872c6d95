// SPDX-License-Identifier: MIT
// include/wedgeflow/errors.hpp
//
// Exception hierarchy. Every error carries the process exit code the CLI
// reports for it, so the mapping lives in one place.

#pragma once

#include <stdexcept>
#include <string>

namespace wedgeflow {

/// Stable CLI exit-code contract.
enum class ExitCode : int {
  ok = 0,
  validation_failed = 1,
  not_sum_of_exponentials = 2,
  degenerate_drift = 3,
  unstable_drift = 4,
  numerical_failure = 5,
  usage = 64,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

#define WEDGEFLOW_DEFINE_ERROR(Name, Code)                         \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(Code, what) {}  \
  }

// Angle or argument outside its documented range.
WEDGEFLOW_DEFINE_ERROR(DomainError, ExitCode::usage);
// sin(delta) or sin(epsilon) too small to normalise the pushing vectors.
WEDGEFLOW_DEFINE_ERROR(DegeneratePushingError, ExitCode::usage);
// Caller broke a documented precondition (e.g. lambda outside the dual cone).
WEDGEFLOW_DEFINE_ERROR(PreconditionError, ExitCode::usage);
// -alpha is not a nonnegative integer.
WEDGEFLOW_DEFINE_ERROR(NotSumOfExponentialsError, ExitCode::not_sum_of_exponentials);
// theta_mu hits one of the excluded directions (a vanishing denominator).
WEDGEFLOW_DEFINE_ERROR(DegenerateDriftError, ExitCode::degenerate_drift);
// Exponent pair construction with a vanishing inner product.
WEDGEFLOW_DEFINE_ERROR(DegeneratePairError, ExitCode::degenerate_drift);
// Drift outside the stability cone: no stationary distribution.
WEDGEFLOW_DEFINE_ERROR(UnstableDriftError, ExitCode::unstable_drift);
// Some exponent does not decay along a ray of the wedge.
WEDGEFLOW_DEFINE_ERROR(NonIntegrableError, ExitCode::numerical_failure);
// Candidate density changes sign.
WEDGEFLOW_DEFINE_ERROR(InvalidDensityError, ExitCode::validation_failed);
// A closed-form value landed outside its admissible range.
WEDGEFLOW_DEFINE_ERROR(InconsistencyError, ExitCode::validation_failed);
// Non-finite state in a simulation.
WEDGEFLOW_DEFINE_ERROR(NumericalBlowupError, ExitCode::numerical_failure);

#undef WEDGEFLOW_DEFINE_ERROR

}  // namespace wedgeflow
