#include "pam/errors.hpp"

namespace pam {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyDimension: return "EmptyDimension";
    case ErrorCode::TimeRoughness: return "TimeRoughness";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::NonIntegrableEndpoint: return "NonIntegrableEndpoint";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::DegenerateTimes: return "DegenerateTimes";
    case ErrorCode::NonpositiveTime: return "NonpositiveTime";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::DomainOrder: return "DomainOrder";
    case ErrorCode::InsufficientRegularity: return "InsufficientRegularity";
    case ErrorCode::EmbeddingNotPSD: return "EmbeddingNotPSD";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange:
    case ErrorCode::EmptyDimension:
    case ErrorCode::TimeRoughness:
    case ErrorCode::PreconditionViolation:
    case ErrorCode::DomainOrder:
    case ErrorCode::InsufficientRegularity:
    case ErrorCode::SizeLimit:
    case ErrorCode::GridMismatch:
    case ErrorCode::InvalidSpec:
    case ErrorCode::DegenerateTimes:
    case ErrorCode::NonpositiveTime:
    case ErrorCode::NonIntegrable:
    case ErrorCode::NonIntegrableEndpoint:
      return true;
    default:
      return false;
  }
}

}  // namespace pam
