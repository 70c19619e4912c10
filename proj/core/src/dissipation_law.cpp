#include "hitlab/dissipation_law.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include "hitlab/fitting.hpp"
#include "hitlab/flux.hpp"
#include "hitlab/parallel.hpp"
#include "hitlab/realspace.hpp"

namespace hitlab {

double dimensionless_dissipation(const SpectralState& state) {
  const ScalarDiagnostics d = diagnostics(state);
  return d.dissipation * d.integral_scale / std::pow(d.rms_velocity, 3);
}

GridPtr sweep_grid(const SweepConfig& config, double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::invalid_range, "viscosity must be positive");
  const double kd = std::pow(config.forcing.injection_rate / (nu * nu * nu), 0.25);
  const double k_max = std::max(config.k_max_factor * kd, 16.0 * config.k_min);
  return make_shared_grid(config.k_min, k_max, config.n_bins);
}

SweepRun run_sweep_member(const SweepConfig& config, double nu, std::size_t index) {
  const GridPtr grid = sweep_grid(config, nu);
  const SpectralState initial = initial_spectrum(grid, config.initial, nu);
  EvolveParams params = config.evolve;
  params.closure.workers = 1;
  SweepRun run;
  run.record = run_forced(initial, params, config.forcing, config.max_time);
  const SpectralState& s = run.record.final_state;
  const ScalarDiagnostics d = diagnostics(s);
  const TransferResult tr = transfer_spectrum(s, params.closure);
  const FluxProfile fp = flux_profile(tr, *grid, d.dissipation);
  run.row.index = index;
  run.row.nu = nu;
  run.row.eps_W = config.forcing.injection_rate;
  run.row.R_L = d.reynolds_L;
  run.row.R_lambda = d.taylor_reynolds;
  run.row.C_eps = d.dissipation * d.integral_scale / std::pow(d.rms_velocity, 3);
  run.row.Pi_max_over_eps = fp.Pi_max_over_eps;
  run.row.stationary = run.record.stationary;
  return run;
}

SweepRecord run_sweep(const SweepConfig& config, std::span<const double> nu_list,
                      const std::function<void(const std::string&)>& log) {
  if (nu_list.empty()) throw Error(ErrorCode::invalid_range, "empty viscosity list");
  for (std::size_t i = 0; i < nu_list.size(); ++i) {
    if (!(nu_list[i] > 0.0)) throw Error(ErrorCode::invalid_range, "viscosities must be positive");
    if (i > 0 && !(nu_list[i] < nu_list[i - 1])) {
      throw Error(ErrorCode::invalid_range, "viscosities must be strictly decreasing");
    }
  }
  const std::size_t n = nu_list.size();
  std::vector<std::optional<SweepRun>> runs(n);
  std::vector<std::string> failures(n);
  std::mutex log_mutex;
  parallel_for(n, config.workers, [&](std::size_t i) {
    try {
      runs[i] = run_sweep_member(config, nu_list[i], i);
      if (log) {
        std::lock_guard<std::mutex> lock(log_mutex);
        log("run " + std::to_string(i) + " nu=" + std::to_string(nu_list[i]) +
            " R_lambda=" + std::to_string(runs[i]->row.R_lambda));
      }
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  SweepRecord rec;
  for (std::size_t i = 0; i < n; ++i) {
    if (!runs[i]) {
      rec.warnings.push_back("run " + std::to_string(i) + " (nu=" + std::to_string(nu_list[i]) +
                             ") excluded: " + failures[i]);
      continue;
    }
    rec.rows.push_back(runs[i]->row);
    rec.spectra.push_back(runs[i]->record.final_state);
    rec.records.push_back(std::move(runs[i]->record));
  }
  if (log) {
    for (const auto& w : rec.warnings) log("warning: " + w);
  }
  if (rec.rows.empty()) throw Error(ErrorCode::all_runs_failed, "no sweep run became stationary");
  return rec;
}

FitResult fit_asymptote(std::span<const SweepRow> rows, bool quadratic) {
  if (rows.size() < 4) {
    throw Error(ErrorCode::insufficient_span, "need at least 4 rows, got " + std::to_string(rows.size()));
  }
  double lo = rows[0].R_L, hi = rows[0].R_L;
  for (const auto& r : rows) {
    if (!(r.R_L > 0.0)) throw Error(ErrorCode::invalid_range, "R_L must be positive");
    lo = std::min(lo, r.R_L);
    hi = std::max(hi, r.R_L);
  }
  if (hi < 8.0 * lo) {
    throw Error(ErrorCode::insufficient_span, "R_L spans only a factor " + std::to_string(hi / lo));
  }
  std::vector<double> ones(rows.size(), 1.0), inv(rows.size()), inv2(rows.size()), y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    inv[i] = 1.0 / rows[i].R_L;
    inv2[i] = inv[i] * inv[i];
    y[i] = rows[i].C_eps;
  }
  std::vector<std::vector<double>> cols{ones, inv};
  if (quadratic) cols.push_back(inv2);
  const LinearFit f = least_squares(cols, y);
  FitResult out;
  out.quadratic = quadratic;
  out.C_eps_inf = f.coef[0];
  out.C = f.coef[1];
  out.C_eps_inf_stderr = f.stderrs[0];
  out.C_stderr = f.stderrs[1];
  if (quadratic) {
    out.C2 = f.coef[2];
    out.C2_stderr = f.stderrs[2];
  }
  out.covariance = f.covariance;
  out.r_squared = f.r_squared;
  out.residuals = f.residuals;
  out.n_points = rows.size();
  return out;
}

std::vector<FitCurvePoint> fit_curve(const FitResult& fit, std::span<const SweepRow> rows,
                                     std::size_t count) {
  double top = 0.0;
  for (const auto& r : rows) top = std::max(top, 1.0 / r.R_L);
  top *= 1.05;
  std::vector<FitCurvePoint> pts(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = count > 1 ? top * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    pts[i] = {x, fit.C_eps_inf + fit.C * x + fit.C2 * x * x};
  }
  return pts;
}

namespace {

std::vector<double> local_exponents(const RunRecord& decay, std::vector<double>& times) {
  std::vector<double> lt, le;
  for (const auto& s : decay.series) {
    if (s.t > 0.0 && s.total_energy > 0.0) {
      times.push_back(s.t);
      lt.push_back(std::log(s.t));
      le.push_back(std::log(s.total_energy));
    }
  }
  if (lt.size() < 3) return {};
  return derivative(lt, le);
}

}  // namespace

double fiducial_time(const RunRecord& decay, double tolerance, double span_decades) {
  std::vector<double> times;
  const auto n = local_exponents(decay, times);
  const double span = std::pow(10.0, span_decades);
  // Interior samples only: the one-sided end derivatives are less accurate.
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    const double end = times[i] * span;
    if (times[times.size() - 2] < end) break;
    double mean = 0.0;
    std::size_t count = 0;
    for (std::size_t j = i; j + 1 < times.size() && times[j] <= end; ++j) {
      mean += n[j];
      ++count;
    }
    mean /= static_cast<double>(count);
    bool flat = count >= 3;
    for (std::size_t j = i; flat && j + 1 < times.size() && times[j] <= end; ++j) {
      flat = std::abs(n[j] - mean) <= tolerance * std::abs(mean);
    }
    if (flat) return times[i];
  }
  throw Error(ErrorCode::transient_not_passed,
              "decay exponent never settles within " + std::to_string(tolerance) +
                  " over half a decade of time");
}

DecayCoefficient decay_dissipation_coefficient(const RunRecord& decay, std::optional<double> t_e,
                                               double x) {
  if (decay.snapshots.size() < 3 || decay.snapshots.size() != decay.series.size()) {
    throw Error(ErrorCode::insufficient_data, "decay record carries no snapshots");
  }
  if (!(x > 0.0)) throw Error(ErrorCode::invalid_range, "x must be positive");
  const double te = t_e ? *t_e : fiducial_time(decay);
  std::size_t m = 0;
  for (std::size_t i = 1; i < decay.snapshots.size(); ++i) {
    if (std::abs(decay.snapshots[i].t - te) < std::abs(decay.snapshots[m].t - te)) m = i;
  }
  m = std::clamp<std::size_t>(m, 1, decay.snapshots.size() - 2);
  const SpectralState& ref = decay.snapshots[m];
  const ScalarDiagnostics d = diagnostics(ref);
  const double r = x * d.integral_scale;
  const double turnover = d.integral_scale / d.rms_velocity;
  const std::vector<double> rr{r};
  std::vector<double> tt(3), g2(3);
  for (std::size_t k = 0; k < 3; ++k) {
    const SpectralState& s = decay.snapshots[m - 1 + k];
    tt[k] = s.t / turnover;
    g2[k] = s2_from_spectrum(s, rr)[0] / (d.rms_velocity * d.rms_velocity);
  }
  DecayCoefficient out;
  out.t_e = ref.t;
  out.C_eps = d.dissipation * d.integral_scale / std::pow(d.rms_velocity, 3);
  out.R_L = d.reynolds_L;
  out.x = x;
  out.B2 = 0.75 * derivative(tt, g2)[1];
  std::vector<double> times;
  const auto n = local_exponents(decay, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] == ref.t) out.decay_exponent = n[i];
  }
  return out;
}

}  // namespace hitlab
