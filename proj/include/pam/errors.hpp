#pragma once

#include <stdexcept>
#include <string>

namespace pam {

enum class ErrorCode {
  OutOfRange,
  EmptyDimension,
  TimeRoughness,
  NonIntegrable,
  NonIntegrableEndpoint,
  ToleranceNotMet,
  DegenerateTimes,
  NonpositiveTime,
  PreconditionViolation,
  DomainOrder,
  InsufficientRegularity,
  EmbeddingNotPSD,
  SizeLimit,
  GridMismatch,
  Unstable,
  InvalidSpec,
  Io,
};

const char* to_string(ErrorCode code);

/// Numerical or validation failure raised by every pam module.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for codes that signal bad input rather than a numerical failure.
bool is_usage_error(ErrorCode code);

}  // namespace pam
