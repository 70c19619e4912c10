#include "hitlab/fitting.hpp"

#include <cmath>
#include <string>

#include "hitlab/error.hpp"

namespace hitlab {
namespace {

// Inverse of a small symmetric positive-definite matrix by Gauss-Jordan
// elimination with partial pivoting.
std::vector<double> invert(std::vector<double> a, std::size_t p) {
  std::vector<double> inv(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) inv[i * p + i] = 1.0;
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::abs(a[r * p + c]) > std::abs(a[piv * p + c])) piv = r;
    }
    if (std::abs(a[piv * p + c]) <= 1e-14 * scale) {
      throw Error(ErrorCode::insufficient_data, "rank-deficient design matrix");
    }
    if (piv != c) {
      for (std::size_t j = 0; j < p; ++j) {
        std::swap(a[c * p + j], a[piv * p + j]);
        std::swap(inv[c * p + j], inv[piv * p + j]);
      }
    }
    const double d = a[c * p + c];
    for (std::size_t j = 0; j < p; ++j) {
      a[c * p + j] /= d;
      inv[c * p + j] /= d;
    }
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const double f = a[r * p + c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < p; ++j) {
        a[r * p + j] -= f * a[c * p + j];
        inv[r * p + j] -= f * inv[c * p + j];
      }
    }
  }
  return inv;
}

}  // namespace

LinearFit least_squares(const std::vector<std::vector<double>>& columns,
                        std::span<const double> y) {
  const std::size_t p = columns.size();
  const std::size_t n = y.size();
  if (p == 0 || n <= p) {
    throw Error(ErrorCode::insufficient_data,
                std::to_string(n) + " points for " + std::to_string(p) + " parameters");
  }
  for (const auto& c : columns) {
    if (c.size() != n) throw Error(ErrorCode::length_mismatch, "column length differs from data");
  }
  std::vector<double> xtx(p * p, 0.0), xty(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += columns[a][i] * columns[b][i];
      xtx[a * p + b] = xtx[b * p + a] = s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += columns[a][i] * y[i];
    xty[a] = s;
  }
  const auto inv = invert(xtx, p);
  LinearFit fit;
  fit.n = n;
  fit.coef.assign(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) fit.coef[a] += inv[a * p + b] * xty[b];
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double ss_res = 0.0, ss_tot = 0.0;
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t a = 0; a < p; ++a) pred += fit.coef[a] * columns[a][i];
    fit.residuals[i] = y[i] - pred;
    ss_res += fit.residuals[i] * fit.residuals[i];
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.sigma2 = ss_res / static_cast<double>(n - p);
  fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  fit.covariance.resize(p * p);
  fit.stderrs.resize(p);
  for (std::size_t i = 0; i < p * p; ++i) fit.covariance[i] = fit.sigma2 * inv[i];
  for (std::size_t a = 0; a < p; ++a) fit.stderrs[a] = std::sqrt(fit.covariance[a * p + a]);
  return fit;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::length_mismatch, "x and y lengths differ");
  std::vector<double> ones(x.size(), 1.0);
  const auto f = least_squares({ones, std::vector<double>(x.begin(), x.end())}, y);
  LineFit out;
  out.intercept = f.coef[0];
  out.slope = f.coef[1];
  out.intercept_stderr = f.stderrs[0];
  out.slope_stderr = f.stderrs[1];
  out.r_squared = f.r_squared;
  return out;
}

}  // namespace hitlab
