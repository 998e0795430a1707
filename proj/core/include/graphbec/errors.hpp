#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphbec {

enum class ErrorCode {
  // input validation
  NonPositiveLength,
  DisconnectedGraph,
  DanglingEndpoint,
  NonPositiveScale,
  MissingStrength,
  InvalidConditions,
  ChemicalPotentialAboveGroundState,
  TooFewLevels,
  InvalidArgument,
  // numerical failures
  CutoffTooSmall,
  BoundViolation,
  NoConvergence,
  InsufficientCutoff,
  QuadratureFailure,
  Overflow,
};

enum class ErrorCategory { Validation, Numerical };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. Validation errors signal bad
/// input; numerical errors signal a solver that could not meet its tolerance.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return graphbec::category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace graphbec
