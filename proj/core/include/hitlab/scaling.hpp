#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hitlab/spectra.hpp"

namespace hitlab {

/// Dimensionless spectrum table (k_hat, E_hat).
struct RescaledSpectrum {
  std::vector<double> k_hat;
  std::vector<double> E_hat;
};

/// k / k_d and E / (eps nu^5)^(1/4) using the state's own eps and nu.
RescaledSpectrum kolmogorov_rescale(const SpectralState& state);

/// Inverse of kolmogorov_rescale for given eps and nu: returns physical (k, E).
RescaledSpectrum kolmogorov_unscale(const RescaledSpectrum& table, double eps, double nu);

/// K41 table multiplied by (k L_ext)^mu. mu = 0 reproduces the K41 table.
RescaledSpectrum k62_rescale(const SpectralState& state, double mu, double external_scale);

enum class CollapseMode { k41, k62 };

struct CollapseOptions {
  CollapseMode mode = CollapseMode::k41;
  double mu = 0.1;
  /// One external scale per state (K62 only).
  std::vector<double> external_scales;
  double k_hat_min = 0.05;
  std::size_t shared_points = 64;
};

struct PairDistance {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;
};

struct CollapseReport {
  CollapseMode mode = CollapseMode::k41;
  double mu = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  /// Window narrower than half a decade.
  bool is_void = false;
  std::vector<PairDistance> pairwise;
  double collapse_error = 0.0;
  std::vector<RescaledSpectrum> tables;
};

/// Root-mean-square distance of ln E_hat between every pair of states over
/// the common k_hat window (k_hat >= k_hat_min), on a shared log grid; the
/// maximum is the collapse error. Throws ErrorCode::empty_window.
CollapseReport collapse_error(std::span<const SpectralState> states,
                              const CollapseOptions& options = {});

/// Box-size policy for K62 comparisons: scales rising geometrically from
/// L_box to 8 L_box in order of increasing R_lambda.
std::vector<double> external_scales_by_reynolds(std::span<const SpectralState> states,
                                                double box_scale, double spread = 8.0);

std::string to_string(CollapseMode mode);

}  // namespace hitlab
