#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hitlab {

/// Ordinary least squares y ~ sum_j coef_j * column_j.
struct LinearFit {
  std::vector<double> coef;
  std::vector<double> stderrs;
  /// Row-major p x p covariance sigma^2 (X^T X)^-1.
  std::vector<double> covariance;
  std::vector<double> residuals;
  double r_squared = 0.0;
  double sigma2 = 0.0;
  std::size_t n = 0;
};

/// Throws ErrorCode::insufficient_data unless rows > columns and the design
/// matrix has full rank.
LinearFit least_squares(const std::vector<std::vector<double>>& columns, std::span<const double> y);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace hitlab
