#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hitlab/closure.hpp"
#include "hitlab/error.hpp"

namespace hitlab {

enum class ForcingMode { none, band };

/// Constant-rate injection eps_W spread over k <= band_top in proportion to
/// E(k), or uniformly when the band holds no energy.
struct ForcingSpec {
  ForcingMode mode = ForcingMode::none;
  double band_top = 0.0;
  double injection_rate = 0.0;

  void validate(const WavenumberGrid& grid) const;
};

/// Per-node forcing F(k) with int F dk == eps_W in the discrete rule.
std::vector<double> forcing_spectrum(const SpectralState& state, const ForcingSpec& forcing);

struct EvolveParams {
  ClosureParams closure;
  double dt_safety = 0.25;
  /// Upper bound on any step; 0 disables it.
  double dt_max = 0.0;
  /// Time-series cadence; 0 records every accepted step.
  double sample_interval = 0.0;
  double balance_tolerance = 0.01;
  double clip_tolerance = 1e-10;
  int max_step_halvings = 12;
  std::size_t max_steps = 50'000'000;
  /// Stationarity: |dE_tot/dt| <= stationarity_tolerance * eps held for
  /// stationarity_turnovers large-eddy times, with the relative L2 drift of
  /// E over each turnover below drift_tolerance.
  double stationarity_tolerance = 0.01;
  double stationarity_turnovers = 2.0;
  double drift_tolerance = 1e-3;
  /// Keep a copy of the state at every recorded sample.
  bool keep_snapshots = false;
  /// Optional observer called on every recorded sample.
  std::function<void(const SpectralState&)> on_sample;
};

struct StepReport {
  SpectralState state;
  double clipped_energy = 0.0;
  /// |dE_tot/dt - (eps_W - eps + int T)| / max(eps, eps_W) for the step.
  double balance_residual = 0.0;
  double net_transfer = 0.0;
};

/// One integrating-factor Heun step. Throws ErrorCode::instability when the
/// energy balance residual or the clipped energy exceeds its tolerance and
/// ErrorCode::dt_too_large when dt exceeds the suggest_dt bound.
StepReport step_detailed(const SpectralState& state, const EvolveParams& params,
                         const ForcingSpec& forcing, double dt);
SpectralState step(const SpectralState& state, const EvolveParams& params,
                   const ForcingSpec& forcing, double dt);

double suggest_dt(const SpectralState& state, const EvolveParams& params,
                  const ForcingSpec& forcing = {});

struct TimeSample {
  double t = 0.0;
  double total_energy = 0.0;
  double dissipation = 0.0;
  double Pi_max = 0.0;
  double taylor_reynolds = 0.0;
  double C_eps = 0.0;
};

struct RunRecord {
  std::vector<TimeSample> series;
  /// States at the sample times when EvolveParams::keep_snapshots is set.
  std::vector<SpectralState> snapshots;
  SpectralState final_state;
  bool stationary = false;
  std::size_t steps = 0;
  double clipped_energy = 0.0;
  double max_balance_residual = 0.0;
  /// Time at which the stationarity window closed (forced runs).
  double stationary_since = 0.0;
};

TimeSample sample_of(const SpectralState& state, const ClosureParams& closure);

/// Free decay to t_end. A failing step aborts with the record so far
/// available through the thrown RunAborted.
RunRecord run_decay(const SpectralState& initial, const EvolveParams& params, double t_end);

/// Forced run until stationary or max_time. Throws RunAborted carrying an
/// ErrorCode::non_convergence error when max_time is reached first.
RunRecord run_forced(const SpectralState& initial, const EvolveParams& params,
                     const ForcingSpec& forcing, double max_time);

/// Error raised by the run drivers; carries the partial record.
class RunAborted : public Error {
 public:
  RunAborted(const Error& cause, RunRecord partial)
      : Error(cause), partial_(std::move(partial)) {}
  const RunRecord& partial() const noexcept { return partial_; }

 private:
  RunRecord partial_;
};

}  // namespace hitlab
