#include "hitlab/spectra.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hitlab/error.hpp"

namespace hitlab {

void SpectralState::validate() const {
  if (!grid) throw Error(ErrorCode::invalid_range, "spectral state has no grid");
  if (E.size() != grid->size()) {
    throw Error(ErrorCode::length_mismatch, "spectrum has " + std::to_string(E.size()) +
                                                " samples for a " +
                                                std::to_string(grid->size()) + "-node grid");
  }
  for (double e : E) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw Error(ErrorCode::invalid_range, "energy spectrum must be finite and non-negative");
    }
  }
  if (!(t >= 0.0)) throw Error(ErrorCode::invalid_range, "time must be non-negative");
  if (!(nu > 0.0)) throw Error(ErrorCode::invalid_range, "viscosity must be positive");
}

GridPtr make_shared_grid(double k_min, double k_max, std::size_t n_bins) {
  return std::make_shared<const WavenumberGrid>(WavenumberGrid::make(k_min, k_max, n_bins));
}

SpectralState initial_spectrum(GridPtr grid, const InitialSpectrumShape& shape, double nu) {
  if (!grid) throw Error(ErrorCode::invalid_range, "initial_spectrum needs a grid");
  const double kp = shape.peak_wavenumber;
  if (!(kp >= grid->k_min()) || !(kp <= grid->k_max())) {
    throw Error(ErrorCode::out_of_range, "peak wavenumber " + std::to_string(kp) +
                                             " outside the grid");
  }
  if (shape.low_k_exponent != 4 && shape.low_k_exponent != 2) {
    throw Error(ErrorCode::invalid_range, "low-k exponent must be 4 or 2");
  }
  if (!(shape.total_energy >= 0.0)) {
    throw Error(ErrorCode::invalid_range, "target energy must be non-negative");
  }
  const double n = shape.low_k_exponent;
  SpectralState s;
  s.grid = grid;
  s.nu = nu;
  s.t = 0.0;
  s.E.resize(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double x = grid->node(i) / kp;
    s.E[i] = std::pow(x, n) * std::exp(-0.5 * n * x * x);
  }
  const double raw = grid->integrate(s.E);
  if (raw > 0.0) {
    for (double& e : s.E) e *= shape.total_energy / raw;
  }
  s.validate();
  return s;
}

double total_energy(const SpectralState& state) { return state.mesh().integrate(state.E); }

double dissipation_rate(const SpectralState& state) {
  const auto k = state.mesh().nodes();
  std::vector<double> d(state.E.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = 2.0 * state.nu * k[i] * k[i] * state.E[i];
  return state.mesh().integrate(d);
}

double integral_scale(const SpectralState& state) {
  const double etot = total_energy(state);
  if (!(etot > 0.0)) throw Error(ErrorCode::degenerate_spectrum, "zero total energy");
  const auto k = state.mesh().nodes();
  std::vector<double> f(state.E.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = state.E[i] / k[i];
  return 0.75 * std::numbers::pi * state.mesh().integrate(f) / etot;
}

ScalarDiagnostics diagnostics(const SpectralState& state) {
  ScalarDiagnostics d;
  d.total_energy = total_energy(state);
  d.dissipation = dissipation_rate(state);
  if (!(d.total_energy > 0.0) || !(d.dissipation > 0.0)) {
    throw Error(ErrorCode::degenerate_spectrum, "diagnostics need a non-zero spectrum");
  }
  const double nu = state.nu;
  d.rms_velocity = std::sqrt(2.0 * d.total_energy / 3.0);
  d.integral_scale = integral_scale(state);
  d.reynolds_L = d.rms_velocity * d.integral_scale / nu;
  d.taylor_reynolds = d.rms_velocity * d.rms_velocity * std::sqrt(15.0 / (nu * d.dissipation));
  d.kolmogorov_wavenumber = std::pow(d.dissipation / (nu * nu * nu), 0.25);
  return d;
}

std::vector<double> spectral_density(const SpectralState& state) {
  const auto k = state.mesh().nodes();
  std::vector<double> c(state.E.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = state.E[i] / (4.0 * std::numbers::pi * k[i] * k[i]);
  }
  return c;
}

std::vector<double> energy_from_density(const WavenumberGrid& grid, std::span<const double> C) {
  if (C.size() != grid.size()) throw Error(ErrorCode::length_mismatch, "density length");
  const auto k = grid.nodes();
  std::vector<double> e(C.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = 4.0 * std::numbers::pi * k[i] * k[i] * C[i];
  return e;
}

double spectrum_at(const SpectralState& state, double k) {
  const WavenumberGrid& g = state.mesh();
  const double tol = 1e-12 * g.k_max();
  if (!(k >= g.k_min() - tol && k <= g.k_max() + tol)) {
    throw Error(ErrorCode::out_of_range, "k=" + std::to_string(k) + " outside the grid");
  }
  const std::size_t nn = g.nearest_node(k);
  if (std::abs(k - g.node(nn)) <= 1e-12 * k) return state.E[nn];
  const std::size_t c = g.cell_of(k);
  const double a = g.node(c), b = g.node(c + 1);
  const double ea = state.E[c], eb = state.E[c + 1];
  if (ea > 0.0 && eb > 0.0) {
    return ea * std::exp(std::log(k / a) / std::log(b / a) * std::log(eb / ea));
  }
  return ea + (k - a) / (b - a) * (eb - ea);
}

}  // namespace hitlab
