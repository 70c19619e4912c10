#include "hitlab/error.hpp"

namespace hitlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_range: return "invalid-range";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::degenerate_spectrum: return "degenerate-spectrum";
    case ErrorCode::not_triangle: return "not-triangle";
    case ErrorCode::quadrature_failure: return "quadrature-failure";
    case ErrorCode::instability: return "instability";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::conservation_violated: return "conservation-violated";
    case ErrorCode::no_sign_change: return "no-sign-change";
    case ErrorCode::insufficient_span: return "insufficient-span";
    case ErrorCode::all_runs_failed: return "all-runs-failed";
    case ErrorCode::transient_not_passed: return "transient-not-passed";
    case ErrorCode::dt_too_large: return "dt-too-large";
    case ErrorCode::empty_window: return "empty-window";
    case ErrorCode::under_resolved: return "under-resolved-duration";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::window_outside_support: return "window-outside-support";
    case ErrorCode::kernel_divergence: return "kernel-divergence";
    case ErrorCode::not_captured: return "not-captured";
    case ErrorCode::out_of_channel: return "out-of-channel";
    case ErrorCode::config_invalid: return "config-invalid";
    case ErrorCode::io_failure: return "io-failure";
  }
  return "unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::config_invalid:
    case ErrorCode::invalid_range:
    case ErrorCode::length_mismatch:
    case ErrorCode::out_of_range:
    case ErrorCode::not_triangle:
    case ErrorCode::out_of_channel:
    case ErrorCode::insufficient_span:
    case ErrorCode::insufficient_data:
    case ErrorCode::window_outside_support:
    case ErrorCode::under_resolved:
      return ErrorCategory::configuration;
    case ErrorCode::io_failure:
      return ErrorCategory::io;
    default:
      return ErrorCategory::numerical;
  }
}

int exit_code_for(ErrorCode code) noexcept {
  switch (category_of(code)) {
    case ErrorCategory::configuration: return 2;
    case ErrorCategory::numerical: return 3;
    case ErrorCategory::io: return 4;
  }
  return 3;
}

}  // namespace hitlab
