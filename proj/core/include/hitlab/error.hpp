#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hitlab {

/// Failure categories. Each maps onto one of the CLI exit codes
/// (2 = configuration, 3 = numerical, 4 = I/O).
enum class ErrorCode {
  invalid_range,
  length_mismatch,
  out_of_range,
  degenerate_spectrum,
  not_triangle,
  quadrature_failure,
  instability,
  non_convergence,
  conservation_violated,
  no_sign_change,
  insufficient_span,
  all_runs_failed,
  transient_not_passed,
  dt_too_large,
  empty_window,
  under_resolved,
  insufficient_data,
  window_outside_support,
  kernel_divergence,
  not_captured,
  out_of_channel,
  config_invalid,
  io_failure,
};

enum class ErrorCategory { configuration, numerical, io };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace hitlab
