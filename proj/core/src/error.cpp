#include "frontline/error.hpp"

namespace frontline {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerationRequired: return "DegenerationRequired";
    case ErrorCode::ReactionExponentOutOfRange: return "ReactionExponentOutOfRange";
    case ErrorCode::ConvectionExponentOutOfRange: return "ConvectionExponentOutOfRange";
    case ErrorCode::InterfaceNonexistent: return "InterfaceNonexistent";
    case ErrorCode::SingularIsotherm: return "SingularIsotherm";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::SlopeTooFlat: return "SlopeTooFlat";
    case ErrorCode::CoefficientNonfinite: return "CoefficientNonfinite";
    case ErrorCode::CoefficientSignViolation: return "CoefficientSignViolation";
    case ErrorCode::NoGeometricRatio: return "NoGeometricRatio";
    case ErrorCode::NonfiniteRhs: return "NonfiniteRhs";
    case ErrorCode::BoundaryDegenerate: return "BoundaryDegenerate";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::RhsFailure: return "RhsFailure";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::MeshIncompatible: return "MeshIncompatible";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace frontline
