#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdyn {

/// Stable error codes; their names appear verbatim in CLI error records.
enum class ErrorCode {
  NotInvertible,
  Overflow,
  ThetaNotResolved,
  ConeNotPreserved,
  NotUnitDeterminant,
  EmptyWord,
  DimensionMismatch,
  CupIncompatible,
  CupMissing,
  NotEigenclass,
  HypothesisViolated,
  DegenerateFunction,
  NoExpansion,
  ZeroFrequency,
  InvalidArgument,
  ParseError,
  ValidationError,
  IoError,
  Internal,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kdyn
