#include "graphbec/errors.hpp"

namespace graphbec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::MissingStrength: return "MissingStrength";
    case ErrorCode::InvalidConditions: return "InvalidConditions";
    case ErrorCode::ChemicalPotentialAboveGroundState: return "ChemicalPotentialAboveGroundState";
    case ErrorCode::TooFewLevels: return "TooFewLevels";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InsufficientCutoff: return "InsufficientCutoff";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::CutoffTooSmall:
    case ErrorCode::BoundViolation:
    case ErrorCode::NoConvergence:
    case ErrorCode::InsufficientCutoff:
    case ErrorCode::QuadratureFailure:
    case ErrorCode::Overflow:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Validation;
  }
}

}  // namespace graphbec
