#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hitlab/spectra.hpp"

namespace hitlab {

/// R(k) = E(k)^(1/2) / (nu k^(1/2)) with nu the state's viscosity.
double local_reynolds(const SpectralState& state, double k);

/// Smallest grid node k0 whose truncated dissipation integral reaches
/// `capture` of the full one. Throws ErrorCode::not_captured for capture > 1
/// and ErrorCode::degenerate_spectrum for a spectrum without dissipation.
double effective_cutoff(const SpectralState& state, double capture = 0.999);

/// Inertial model spectrum alpha eps^(2/3) k^(-5/3).
struct ModelSpectrum {
  double alpha = 1.6;
  double eps = 1.0;
  double operator()(double k) const;
};

/// alpha eps^(2/3) k^(-5/3) exp(-beta (k/k_d)^2) on the given grid with
/// beta = (alpha Gamma(2/3))^(3/2), the value for which the spectrum
/// dissipates exactly eps at viscosity nu.
SpectralState model_dissipation_spectrum(GridPtr grid, double alpha, double eps, double nu);

/// delta nu for eliminating the band [band_lo, band_hi] at current viscosity nu.
using IncrementKernel =
    std::function<double(double band_lo, double band_hi, double nu, const ModelSpectrum& model)>;

/// A int_band E(j) / (nu j^2) (j / band_hi)^weight_exponent dj.
double eddy_viscosity_increment(double band_lo, double band_hi, double nu,
                                const ModelSpectrum& model, double amplitude = 1.0 / 9.0,
                                double weight_exponent = 0.0);

struct RgConfig {
  double h = 0.7;
  double nu0 = 1.0;
  double k0 = 1.0;
  double eps = 1.0;
  /// Default kernel settings; ignored when `kernel` is set.
  double amplitude = 1.0 / 9.0;
  double weight_exponent = 0.0;
  IncrementKernel kernel;
  double tolerance = 1e-8;
  std::size_t max_iterations = 1000;
  /// Iterations carried on after convergence so the trace ends on the
  /// fixed point.
  std::size_t settle_iterations = 12;

  double bandwidth() const { return 1.0 - h; }
  void validate() const;
};

struct RgStep {
  std::size_t n = 0;
  double k_n = 0.0;
  double nu_n = 0.0;
  double nu_tilde = 0.0;  // nu_n eps^(-1/3) k_n^(4/3)
  double alpha = 0.0;     // 2 / (3 nu_tilde)
  double delta_nu = 0.0;  // increment that produced this step (0 for n = 0)
};

struct RgState {
  std::size_t iteration = 0;
  double k_n = 0.0;
  double nu_n = 0.0;
  std::vector<RgStep> history;
  bool fixed_point = false;
};

/// alpha for which eps = 2 nu int_0^k E dk k^2 with E = alpha eps^(2/3)
/// k^(-5/3): alpha = 2 / (3 nu_tilde).
double self_consistent_alpha(double nu_tilde);

RgState initial_rg_state(const RgConfig& config);

/// One band elimination: nu_{n+1} = nu_n + delta nu_n over [h k_n, k_n]
/// with the model prefactor taken self-consistently from nu_n, then
/// k_{n+1} = h k_n. Throws ErrorCode::kernel_divergence on a non-finite or
/// negative increment.
RgState eliminate_band(const RgState& state, const RgConfig& config);

struct RgReport {
  RgState state;
  double nu_tilde_star = 0.0;
  double alpha = 0.0;
  std::size_t iterations = 0;  // iterations to meet the tolerance
  /// Slope of ln nu_n against ln k_n over the last 10 iterations.
  double tail_slope = 0.0;
};

/// Throws ErrorCode::non_convergence after max_iterations.
RgReport iterate_to_fixed_point(const RgConfig& config);

struct RgSweepRow {
  double h = 0.0;
  double eta = 0.0;
  double nu_tilde_star = 0.0;
  double alpha = 0.0;
  std::size_t iterations = 0;
};

std::vector<RgSweepRow> rg_sweep(const RgConfig& base, std::span<const double> h_values,
                                 std::size_t workers = 1);

}  // namespace hitlab
