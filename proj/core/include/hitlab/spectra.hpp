#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hitlab/grid.hpp"

namespace hitlab {

using GridPtr = std::shared_ptr<const WavenumberGrid>;

/// Energy spectrum samples E(k_i) on a shared grid, with the time and the
/// kinematic viscosity they belong to. Value type; copies share the grid.
struct SpectralState {
  GridPtr grid;
  std::vector<double> E;
  double t = 0.0;
  double nu = 0.0;

  const WavenumberGrid& mesh() const { return *grid; }
  std::size_t size() const noexcept { return E.size(); }

  /// Throws ErrorCode::invalid_range on a missing grid, a size mismatch,
  /// negative or non-finite E, t < 0 or nu <= 0.
  void validate() const;
};

/// Single-time isotropic diagnostics. Conventions used throughout:
///   U^2 = (2/3) E_tot,  L = (3 pi / 4) int k^-1 E dk / E_tot,
///   R_L = U L / nu,     R_lambda = U^2 sqrt(15 / (nu eps)),
///   k_d = (eps / nu^3)^(1/4).
struct ScalarDiagnostics {
  double total_energy = 0.0;
  double dissipation = 0.0;
  double rms_velocity = 0.0;
  double integral_scale = 0.0;
  double reynolds_L = 0.0;
  double taylor_reynolds = 0.0;
  double kolmogorov_wavenumber = 0.0;
};

/// Initial spectrum family E(k) ~ k^n exp(-(n/2)(k/k_p)^2), peaked at k_p.
/// n = 4 is the default; n = 2 exists only for contrast experiments.
struct InitialSpectrumShape {
  double peak_wavenumber = 1.0;
  double total_energy = 1.0;
  int low_k_exponent = 4;
};

GridPtr make_shared_grid(double k_min, double k_max, std::size_t n_bins);

/// Throws ErrorCode::out_of_range when k_p lies outside the grid.
SpectralState initial_spectrum(GridPtr grid, const InitialSpectrumShape& shape, double nu);

double total_energy(const SpectralState& state);
double dissipation_rate(const SpectralState& state);

/// Throws ErrorCode::degenerate_spectrum when E_tot == 0 or eps == 0.
ScalarDiagnostics diagnostics(const SpectralState& state);

/// C(k) = E(k) / (4 pi k^2).
std::vector<double> spectral_density(const SpectralState& state);

/// Inverse of spectral_density.
std::vector<double> energy_from_density(const WavenumberGrid& grid, std::span<const double> C);

/// E at an arbitrary k inside the grid: node values exactly, log-linear
/// interpolation between positive neighbours, linear otherwise. Throws
/// ErrorCode::out_of_range outside [k_min, k_max].
double spectrum_at(const SpectralState& state, double k);

/// Integral scale L = (3 pi / 4) int E/k dk / E_tot.
double integral_scale(const SpectralState& state);

}  // namespace hitlab
