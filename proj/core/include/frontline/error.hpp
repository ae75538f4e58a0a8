#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frontline {

enum class ErrorCode {
  InvalidSpec,
  DegenerationRequired,
  ReactionExponentOutOfRange,
  ConvectionExponentOutOfRange,
  InterfaceNonexistent,
  SingularIsotherm,
  EmptySupport,
  SlopeTooFlat,
  CoefficientNonfinite,
  CoefficientSignViolation,
  NoGeometricRatio,
  NonfiniteRhs,
  BoundaryDegenerate,
  StepSizeUnderflow,
  NewtonDivergence,
  RhsFailure,
  DegenerateDenominator,
  MeshIncompatible,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the integrator in particular) can tell recoverable evaluation
/// failures from configuration mistakes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace frontline
