#include "kdyn/error.hpp"

namespace kdyn {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ThetaNotResolved: return "ThetaNotResolved";
    case ErrorCode::ConeNotPreserved: return "ConeNotPreserved";
    case ErrorCode::NotUnitDeterminant: return "NotUnitDeterminant";
    case ErrorCode::EmptyWord: return "EmptyWord";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CupIncompatible: return "CupIncompatible";
    case ErrorCode::CupMissing: return "CupMissing";
    case ErrorCode::NotEigenclass: return "NotEigenclass";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::DegenerateFunction: return "DegenerateFunction";
    case ErrorCode::NoExpansion: return "NoExpansion";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

}  // namespace kdyn
