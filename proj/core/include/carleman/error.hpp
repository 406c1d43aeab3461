#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace carleman {

enum class ErrorCode {
  invalid_parameter,
  invalid_sequence,
  invalid_variant,
  range_exceeded,
  out_of_domain,
  out_of_sector,
  weight_evaluation,
  lower_bound_failure,
  divergence_detected,
  numerical_failure,
  table_exhausted,
  not_in_class,
  recovery_failure,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library's error kinds.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::invalid_sequence: return "invalid-sequence";
    case ErrorCode::invalid_variant: return "invalid-variant";
    case ErrorCode::range_exceeded: return "range-exceeded";
    case ErrorCode::out_of_domain: return "out-of-domain";
    case ErrorCode::out_of_sector: return "out-of-sector";
    case ErrorCode::weight_evaluation: return "weight-evaluation-error";
    case ErrorCode::lower_bound_failure: return "lower-bound-failure";
    case ErrorCode::divergence_detected: return "divergence-detected";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::table_exhausted: return "table-exhausted";
    case ErrorCode::not_in_class: return "not-in-class";
    case ErrorCode::recovery_failure: return "recovery-failure";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace carleman
