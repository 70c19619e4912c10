#include "hitlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hitlab/flux.hpp"

namespace hitlab {
namespace {

// Bins below this fraction of the spectral peak do not limit the step
// through |T|/E; their drain is bounded through the sink rate instead.
constexpr double kRateFloor = 1e-8;

ClosureParams closure_at(const ClosureParams& base, double t) {
  ClosureParams p = base;
  p.elapsed_time = t;
  return p;
}

double weighted_norm(const WavenumberGrid& g, std::span<const double> v) {
  double s = 0.0;
  const auto W = g.weights();
  for (std::size_t i = 0; i < v.size(); ++i) s += W[i] * v[i] * v[i];
  return std::sqrt(s);
}

double bound_from(const SpectralState& state, const TransferResult& tr, const EvolveParams& params,
                  const ForcingSpec& forcing) {
  const WavenumberGrid& g = state.mesh();
  const auto k = g.nodes();
  const double peak = *std::max_element(state.E.begin(), state.E.end());
  const double floor = kRateFloor * peak;
  double forcing_rate = 0.0;
  if (forcing.mode == ForcingMode::band && forcing.injection_rate > 0.0) {
    double band = 0.0;
    const auto W = g.weights();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (k[i] <= forcing.band_top * (1.0 + 1e-12)) band += W[i] * state.E[i];
    }
    if (band > 0.0) forcing_rate = forcing.injection_rate / band;
  }
  double max_rate = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double rate = 2.0 * state.nu * k[i] * k[i];
    if (!tr.T.empty()) {
      if (peak > 0.0 && state.E[i] >= floor) {
        rate += std::abs(tr.T[i]) / state.E[i];
      } else if (!tr.sink_rate.empty()) {
        rate += std::max(0.0, tr.sink_rate[i]);
      }
    }
    if (k[i] <= forcing.band_top * (1.0 + 1e-12)) rate += forcing_rate;
    max_rate = std::max(max_rate, rate);
  }
  double dt = max_rate > 0.0 ? params.dt_safety / max_rate
                             : std::numeric_limits<double>::infinity();
  if (peak == 0.0 && forcing.mode == ForcingMode::band && forcing.injection_rate > 0.0) {
    // Degenerate start: use the eddy time built from the injection rate and
    // the forcing scale.
    const double tau = std::cbrt(1.0 / (forcing.injection_rate * forcing.band_top *
                                        forcing.band_top));
    dt = std::min(dt, params.dt_safety * tau);
  }
  if (!std::isfinite(dt)) {
    throw Error(ErrorCode::degenerate_spectrum, "no time scale: zero spectrum, viscosity and forcing");
  }
  return dt;
}

std::vector<double> rhs(const SpectralState& s, const TransferResult& tr, const ForcingSpec& f) {
  std::vector<double> out = forcing_spectrum(s, f);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += tr.T[i];
  return out;
}

StepReport heun(const SpectralState& state, const TransferResult& t0, const EvolveParams& params,
                const ForcingSpec& forcing, double dt) {
  const WavenumberGrid& g = state.mesh();
  const std::size_t n = g.size();
  const auto k = g.nodes();
  const auto W = g.weights();
  std::vector<double> decay(n);
  for (std::size_t i = 0; i < n; ++i) decay[i] = std::exp(-2.0 * state.nu * k[i] * k[i] * dt);

  const auto f0 = rhs(state, t0, forcing);
  SpectralState predictor = state;
  predictor.t = state.t + dt;
  for (std::size_t i = 0; i < n; ++i) {
    predictor.E[i] = std::max(0.0, decay[i] * (state.E[i] + dt * f0[i]));
  }
  const TransferResult t1 = transfer_spectrum(predictor, closure_at(params.closure, predictor.t));
  const auto f1 = rhs(predictor, t1, forcing);

  StepReport rep;
  rep.state = predictor;
  double clipped = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = decay[i] * state.E[i] + 0.5 * dt * (decay[i] * f0[i] + f1[i]);
    if (e < 0.0) {
      clipped += W[i] * -e;
      e = 0.0;
    }
    rep.state.E[i] = e;
  }
  rep.clipped_energy = clipped;

  const double e0 = total_energy(state), e1 = total_energy(rep.state);
  const double eps = 0.5 * (dissipation_rate(state) + dissipation_rate(rep.state));
  const double eps_w = forcing.mode == ForcingMode::band ? forcing.injection_rate : 0.0;
  rep.net_transfer = 0.5 * (t0.net_transfer + t1.net_transfer);
  const double imbalance = (e1 - e0) / dt - (eps_w - eps + rep.net_transfer);
  const double scale = std::max(eps, eps_w);
  rep.balance_residual = scale > 0.0 ? std::abs(imbalance) / scale : std::abs(imbalance);

  if (clipped > params.clip_tolerance * std::max(e0, e1) && clipped > 0.0) {
    throw Error(ErrorCode::instability, "clipped energy " + std::to_string(clipped) +
                                            " at t=" + std::to_string(state.t));
  }
  if (rep.balance_residual > params.balance_tolerance) {
    throw Error(ErrorCode::instability, "energy balance residual " +
                                            std::to_string(rep.balance_residual) +
                                            " at t=" + std::to_string(state.t));
  }
  return rep;
}

void check_step_inputs(const SpectralState& state, const ForcingSpec& forcing, double dt) {
  state.validate();
  forcing.validate(state.mesh());
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::invalid_range, "time step must be positive");
  }
}

}  // namespace

void ForcingSpec::validate(const WavenumberGrid& grid) const {
  if (mode == ForcingMode::none) {
    if (injection_rate != 0.0) {
      throw Error(ErrorCode::invalid_range, "forcing mode none requires zero injection rate");
    }
    return;
  }
  if (!(injection_rate >= 0.0) || !std::isfinite(injection_rate)) {
    throw Error(ErrorCode::invalid_range, "injection rate must be non-negative");
  }
  const double tol = 1e-12 * grid.k_max();
  if (!(band_top >= grid.k_min() - tol && band_top <= grid.k_max() + tol)) {
    throw Error(ErrorCode::out_of_range, "forcing band top outside the grid");
  }
}

std::vector<double> forcing_spectrum(const SpectralState& state, const ForcingSpec& forcing) {
  const WavenumberGrid& g = state.mesh();
  const std::size_t n = g.size();
  std::vector<double> F(n, 0.0);
  if (forcing.mode == ForcingMode::none || forcing.injection_rate == 0.0) return F;
  const auto k = g.nodes();
  const auto W = g.weights();
  const double top = forcing.band_top * (1.0 + 1e-12);
  double band_energy = 0.0, band_width = 0.0;
  for (std::size_t i = 0; i < n && k[i] <= top; ++i) {
    band_energy += W[i] * state.E[i];
    band_width += W[i];
  }
  for (std::size_t i = 0; i < n && k[i] <= top; ++i) {
    F[i] = band_energy > 0.0 ? forcing.injection_rate * state.E[i] / band_energy
                             : forcing.injection_rate / band_width;
  }
  return F;
}

double suggest_dt(const SpectralState& state, const EvolveParams& params,
                  const ForcingSpec& forcing) {
  state.validate();
  forcing.validate(state.mesh());
  const TransferResult tr = transfer_spectrum(state, closure_at(params.closure, state.t));
  double dt = bound_from(state, tr, params, forcing);
  if (params.dt_max > 0.0) dt = std::min(dt, params.dt_max);
  return dt;
}

StepReport step_detailed(const SpectralState& state, const EvolveParams& params,
                         const ForcingSpec& forcing, double dt) {
  check_step_inputs(state, forcing, dt);
  const TransferResult t0 = transfer_spectrum(state, closure_at(params.closure, state.t));
  const double bound = bound_from(state, t0, params, forcing);
  if (dt > bound * (1.0 + 1e-12)) {
    throw Error(ErrorCode::dt_too_large,
                "dt=" + std::to_string(dt) + " exceeds the stability bound " + std::to_string(bound));
  }
  return heun(state, t0, params, forcing, dt);
}

SpectralState step(const SpectralState& state, const EvolveParams& params,
                   const ForcingSpec& forcing, double dt) {
  return step_detailed(state, params, forcing, dt).state;
}

namespace {

TimeSample sample_from(const SpectralState& state, const TransferResult& tr) {
  TimeSample s;
  s.t = state.t;
  s.total_energy = total_energy(state);
  s.dissipation = dissipation_rate(state);
  const auto Pi = flux_values(state.mesh(), tr.T);
  s.Pi_max = *std::max_element(Pi.begin(), Pi.end());
  if (s.total_energy > 0.0 && s.dissipation > 0.0) {
    const ScalarDiagnostics d = diagnostics(state);
    s.taylor_reynolds = d.taylor_reynolds;
    s.C_eps = d.dissipation * d.integral_scale / std::pow(d.rms_velocity, 3);
  }
  return s;
}

struct Stationarity {
  double tolerance;
  double turnovers;
  double drift_tolerance;
  double eps_w;
  std::optional<double> window_start;
  std::vector<double> snapshot;
  double next_check = 0.0;
  int passes = 0;

  void reset() {
    window_start.reset();
    passes = 0;
  }

  // Returns true once the window has closed.
  bool update(const SpectralState& before, const SpectralState& after, double dt) {
    const double e0 = total_energy(before), e1 = total_energy(after);
    const double eps = dissipation_rate(after);
    const bool flat = std::abs((e1 - e0) / dt) <= tolerance * eps &&
                      std::abs(eps / eps_w - 1.0) <= 0.02;
    if (!flat) {
      reset();
      return false;
    }
    if (eps <= 0.0 || e1 <= 0.0) return false;
    const ScalarDiagnostics d = diagnostics(after);
    const double turnover = d.integral_scale / d.rms_velocity;
    if (!window_start) {
      window_start = after.t;
      snapshot = after.E;
      next_check = after.t + turnover;
      return false;
    }
    if (after.t < next_check) return false;
    std::vector<double> diff(after.E.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = after.E[i] - snapshot[i];
    const WavenumberGrid& g = after.mesh();
    const double drift = weighted_norm(g, diff) / weighted_norm(g, snapshot);
    snapshot = after.E;
    next_check = after.t + turnover;
    if (drift > drift_tolerance) {
      window_start = after.t;
      passes = 0;
      return false;
    }
    ++passes;
    return passes >= static_cast<int>(std::ceil(turnovers)) &&
           after.t - *window_start >= turnovers * turnover;
  }
};

RunRecord drive(const SpectralState& initial, const EvolveParams& params,
                const ForcingSpec& forcing, double t_end, bool forced) {
  initial.validate();
  forcing.validate(initial.mesh());
  if (!(t_end > initial.t)) throw Error(ErrorCode::invalid_range, "end time must exceed start time");
  RunRecord rec;
  SpectralState state = initial;
  Stationarity stat{params.stationarity_tolerance, params.stationarity_turnovers,
                    params.drift_tolerance, forcing.injection_rate, {}, {}, 0.0, 0};
  double next_sample = initial.t;
  const double t_tol = 1e-12 * std::max(1.0, std::abs(t_end));

  auto record = [&](const SpectralState& s, const TransferResult& tr) {
    rec.series.push_back(sample_from(s, tr));
    if (params.keep_snapshots) rec.snapshots.push_back(s);
    if (params.on_sample) params.on_sample(s);
  };

  try {
    while (true) {
      const TransferResult tr = transfer_spectrum(state, closure_at(params.closure, state.t));
      const bool at_end = state.t >= t_end - t_tol;
      if (state.t >= next_sample - t_tol || at_end || rec.stationary ||
          params.sample_interval <= 0.0) {
        if (rec.series.empty() || rec.series.back().t < state.t) record(state, tr);
        if (params.sample_interval > 0.0) {
          while (next_sample <= state.t + t_tol) next_sample += params.sample_interval;
        }
      }
      if (at_end || rec.stationary) break;
      if (rec.steps >= params.max_steps) {
        throw Error(ErrorCode::non_convergence, "step limit reached at t=" + std::to_string(state.t));
      }
      double dt = bound_from(state, tr, params, forcing);
      if (params.dt_max > 0.0) dt = std::min(dt, params.dt_max);
      if (state.t + dt > t_end) dt = t_end - state.t;

      StepReport rep;
      for (int attempt = 0;; ++attempt) {
        try {
          rep = heun(state, tr, params, forcing, dt);
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::instability || attempt >= params.max_step_halvings) throw;
          dt *= 0.5;
        }
      }
      if (state.t + dt >= t_end - t_tol) rep.state.t = t_end;
      ++rec.steps;
      rec.clipped_energy += rep.clipped_energy;
      rec.max_balance_residual = std::max(rec.max_balance_residual, rep.balance_residual);
      if (forced && stat.update(state, rep.state, rep.state.t - state.t)) {
        rec.stationary = true;
        rec.stationary_since = *stat.window_start;
      }
      state = std::move(rep.state);
    }
  } catch (const Error& e) {
    rec.final_state = state;
    throw RunAborted(e, std::move(rec));
  }
  rec.final_state = state;
  if (forced && !rec.stationary) {
    const double eps = dissipation_rate(state);
    throw RunAborted(Error(ErrorCode::non_convergence,
                           "not stationary by t=" + std::to_string(state.t) +
                               " (eps/eps_W=" + std::to_string(eps / forcing.injection_rate) +
                               ")"),
                     std::move(rec));
  }
  return rec;
}

}  // namespace

TimeSample sample_of(const SpectralState& state, const ClosureParams& closure) {
  return sample_from(state, transfer_spectrum(state, closure_at(closure, state.t)));
}

RunRecord run_decay(const SpectralState& initial, const EvolveParams& params, double t_end) {
  return drive(initial, params, ForcingSpec{}, t_end, false);
}

RunRecord run_forced(const SpectralState& initial, const EvolveParams& params,
                     const ForcingSpec& forcing, double max_time) {
  if (forcing.mode != ForcingMode::band || !(forcing.injection_rate > 0.0)) {
    throw Error(ErrorCode::invalid_range, "forced run needs a band forcing with eps_W > 0");
  }
  return drive(initial, params, forcing, max_time, true);
}

}  // namespace hitlab
