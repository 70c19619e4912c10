#include "hitlab/rg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hitlab/error.hpp"
#include "hitlab/fitting.hpp"
#include "hitlab/parallel.hpp"

namespace hitlab {
namespace {

constexpr double kGauss4x[4] = {-0.86113631159405257522, -0.33998104358485626480,
                                0.33998104358485626480, 0.86113631159405257522};
constexpr double kGauss4w[4] = {0.34785484513745385737, 0.65214515486254614263,
                                0.65214515486254614263, 0.34785484513745385737};

double scaled(double nu, double eps, double k) { return nu * std::pow(eps, -1.0 / 3.0) * std::pow(k, 4.0 / 3.0); }

}  // namespace

double local_reynolds(const SpectralState& state, double k) {
  if (!(state.nu > 0.0)) throw Error(ErrorCode::invalid_range, "viscosity must be positive");
  const double E = spectrum_at(state, k);
  return std::sqrt(std::max(0.0, E)) / (state.nu * std::sqrt(k));
}

double effective_cutoff(const SpectralState& state, double capture) {
  const WavenumberGrid& g = state.mesh();
  if (!(capture > 0.0) || capture > 1.0) {
    throw Error(ErrorCode::not_captured, "capture fraction must lie in (0, 1]");
  }
  const auto k = g.nodes();
  std::vector<double> d(g.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = k[i] * k[i] * state.E[i];
  const double full = g.integrate(d);
  if (!(full > 0.0)) throw Error(ErrorCode::degenerate_spectrum, "spectrum has no dissipation");
  if (capture == 1.0) return g.k_max();
  for (std::size_t m = 1; m < g.size(); ++m) {
    if (g.integrate_to_node(d, m) >= capture * full) return k[m];
  }
  throw Error(ErrorCode::not_captured, "k_max does not capture the requested fraction");
}

double ModelSpectrum::operator()(double k) const {
  return alpha * std::pow(eps, 2.0 / 3.0) * std::pow(k, -5.0 / 3.0);
}

SpectralState model_dissipation_spectrum(GridPtr grid, double alpha, double eps, double nu) {
  if (!(alpha > 0.0) || !(eps > 0.0) || !(nu > 0.0)) {
    throw Error(ErrorCode::invalid_range, "alpha, eps and nu must be positive");
  }
  const double kd = std::pow(eps / (nu * nu * nu), 0.25);
  const double beta = std::pow(alpha * std::tgamma(2.0 / 3.0), 1.5);
  SpectralState s;
  s.grid = std::move(grid);
  s.nu = nu;
  const ModelSpectrum m{alpha, eps};
  for (double k : s.mesh().nodes()) s.E.push_back(m(k) * std::exp(-beta * (k / kd) * (k / kd)));
  return s;
}

double eddy_viscosity_increment(double band_lo, double band_hi, double nu,
                                const ModelSpectrum& model, double amplitude,
                                double weight_exponent) {
  if (!(band_hi >= band_lo) || !(band_lo > 0.0) || !(nu > 0.0)) {
    throw Error(ErrorCode::invalid_range, "bad band or viscosity");
  }
  if (band_hi == band_lo) return 0.0;
  // Composite Gauss-Legendre in u = ln j.
  constexpr int pieces = 16;
  const double a = std::log(band_lo), b = std::log(band_hi);
  const double du = (b - a) / pieces;
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * du;
    for (int q = 0; q < 4; ++q) {
      const double j = std::exp(mid + 0.5 * du * kGauss4x[q]);
      sum += kGauss4w[q] * model(j) / (j * j) * std::pow(j / band_hi, weight_exponent) * j;
    }
  }
  return amplitude * 0.5 * du * sum / nu;
}

void RgConfig::validate() const {
  if (!(h > 0.0 && h < 1.0)) throw Error(ErrorCode::invalid_range, "h must lie in (0, 1)");
  if (!(nu0 > 0.0) || !(k0 > 0.0) || !(eps > 0.0)) {
    throw Error(ErrorCode::invalid_range, "nu0, k0 and eps must be positive");
  }
  if (!(tolerance > 0.0) || max_iterations == 0) {
    throw Error(ErrorCode::invalid_range, "tolerance and iteration limit must be positive");
  }
  if (!kernel && !(amplitude > 0.0)) throw Error(ErrorCode::invalid_range, "kernel amplitude must be positive");
}

double self_consistent_alpha(double nu_tilde) { return 2.0 / (3.0 * nu_tilde); }

RgState initial_rg_state(const RgConfig& config) {
  config.validate();
  RgState s;
  s.k_n = config.k0;
  s.nu_n = config.nu0;
  const double nt = scaled(config.nu0, config.eps, config.k0);
  s.history.push_back({0, config.k0, config.nu0, nt, self_consistent_alpha(nt), 0.0});
  return s;
}

RgState eliminate_band(const RgState& state, const RgConfig& config) {
  if (!(state.k_n > 1e-250 * config.k0)) {
    throw Error(ErrorCode::invalid_range, "cutoff fell below the lowest allowed wavenumber");
  }
  const double nt = scaled(state.nu_n, config.eps, state.k_n);
  const ModelSpectrum model{self_consistent_alpha(nt), config.eps};
  const double lo = config.h * state.k_n;
  const double dnu = config.kernel
                         ? config.kernel(lo, state.k_n, state.nu_n, model)
                         : eddy_viscosity_increment(lo, state.k_n, state.nu_n, model,
                                                    config.amplitude, config.weight_exponent);
  if (!std::isfinite(dnu) || dnu < 0.0) {
    throw Error(ErrorCode::kernel_divergence, "increment " + std::to_string(dnu) + " at iteration " +
                                                  std::to_string(state.iteration));
  }
  RgState next = state;
  next.iteration = state.iteration + 1;
  next.nu_n = state.nu_n + dnu;
  next.k_n = lo;
  const double nt_next = scaled(next.nu_n, config.eps, next.k_n);
  next.history.push_back(
      {next.iteration, next.k_n, next.nu_n, nt_next, self_consistent_alpha(nt_next), dnu});
  next.fixed_point = std::abs(nt_next - nt) < config.tolerance * nt;
  return next;
}

RgReport iterate_to_fixed_point(const RgConfig& config) {
  RgState s = initial_rg_state(config);
  std::size_t converged = 0;
  while (true) {
    if (s.iteration >= config.max_iterations) {
      throw Error(ErrorCode::non_convergence,
                  "no fixed point after " + std::to_string(s.iteration) + " iterations");
    }
    s = eliminate_band(s, config);
    if (converged == 0 && s.fixed_point) converged = s.iteration;
    if (converged > 0 && s.iteration >= converged + config.settle_iterations) break;
  }
  RgReport r;
  r.iterations = converged;
  r.nu_tilde_star = s.history.back().nu_tilde;
  r.alpha = self_consistent_alpha(r.nu_tilde_star);
  const std::size_t tail = std::min<std::size_t>(10, s.history.size() - 1);
  std::vector<double> lk, ln;
  for (std::size_t i = s.history.size() - tail - 1; i < s.history.size(); ++i) {
    lk.push_back(std::log(s.history[i].k_n));
    ln.push_back(std::log(s.history[i].nu_n));
  }
  r.tail_slope = fit_line(lk, ln).slope;
  s.fixed_point = true;
  r.state = std::move(s);
  return r;
}

std::vector<RgSweepRow> rg_sweep(const RgConfig& base, std::span<const double> h_values,
                                 std::size_t workers) {
  std::vector<RgSweepRow> rows(h_values.size());
  parallel_for(h_values.size(), workers, [&](std::size_t i) {
    RgConfig c = base;
    c.h = h_values[i];
    const RgReport r = iterate_to_fixed_point(c);
    rows[i] = {c.h, c.bandwidth(), r.nu_tilde_star, r.alpha, r.iterations};
  });
  return rows;
}

}  // namespace hitlab
