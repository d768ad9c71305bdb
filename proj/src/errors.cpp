#include "growthlab/errors.hpp"

namespace growthlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::Pole: return "PoleError";
    case ErrorCode::PoleOnCircle: return "PoleOnCircle";
    case ErrorCode::OnCircle: return "OnCircle";
    case ErrorCode::NonIntegralWinding: return "NonIntegralWinding";
    case ErrorCode::SingularNode: return "SingularNode";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::BelowDomain: return "BelowDomain";
    case ErrorCode::NonLevelZero: return "NonLevelZero";
    case ErrorCode::BelowRange: return "BelowRange";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::BadBracket: return "BadBracket";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "UnknownError";
}

}  // namespace growthlab
