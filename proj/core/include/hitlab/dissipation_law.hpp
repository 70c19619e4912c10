#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hitlab/evolve.hpp"

namespace hitlab {

/// C_eps = eps L / U^3. Throws ErrorCode::degenerate_spectrum.
double dimensionless_dissipation(const SpectralState& state);

struct SweepRow {
  std::size_t index = 0;  // position in the requested viscosity list
  double nu = 0.0;
  double eps_W = 0.0;
  double R_L = 0.0;
  double R_lambda = 0.0;
  double C_eps = 0.0;
  double Pi_max_over_eps = 0.0;
  bool stationary = false;
};

/// Per-run setup shared by every member of a sweep. The grid of each run
/// spans [k_min, k_max_factor * (eps_W / nu^3)^(1/4)].
struct SweepConfig {
  double k_min = 1.0;
  std::size_t n_bins = 96;
  double k_max_factor = 2.5;
  InitialSpectrumShape initial;
  ForcingSpec forcing{ForcingMode::band, 2.0, 1.0};
  EvolveParams evolve;
  double max_time = 200.0;
  std::size_t workers = 1;
};

GridPtr sweep_grid(const SweepConfig& config, double nu);

struct SweepRun {
  SweepRow row;
  RunRecord record;
};

/// Runs one forced member of the sweep (throws on failure).
SweepRun run_sweep_member(const SweepConfig& config, double nu, std::size_t index);

struct SweepRecord {
  /// Stationary runs only, ordered by viscosity index.
  std::vector<SweepRow> rows;
  std::vector<SpectralState> spectra;
  std::vector<RunRecord> records;
  std::vector<std::string> warnings;
};

/// nu_list must be strictly decreasing. Runs execute on `config.workers`
/// threads; results are assembled by index. Throws
/// ErrorCode::all_runs_failed when no run becomes stationary.
SweepRecord run_sweep(const SweepConfig& config, std::span<const double> nu_list,
                      const std::function<void(const std::string&)>& log = {});

struct FitResult {
  double C_eps_inf = 0.0;
  double C = 0.0;
  /// Coefficient of 1/R_L^2 when the quadratic term is enabled.
  double C2 = 0.0;
  double C_eps_inf_stderr = 0.0;
  double C_stderr = 0.0;
  double C2_stderr = 0.0;
  std::vector<double> covariance;  // row-major, 2x2 or 3x3
  double r_squared = 0.0;
  std::vector<double> residuals;
  std::size_t n_points = 0;
  bool quadratic = false;

  double predict(double R_L) const { return C_eps_inf + C / R_L + C2 / (R_L * R_L); }
};

/// Least squares of C_eps against 1/R_L. Throws ErrorCode::insufficient_span
/// with fewer than 4 rows or an R_L range narrower than a factor 8.
FitResult fit_asymptote(std::span<const SweepRow> rows, bool quadratic = false);

/// Reference constants of the DNS fit the model is compared against.
inline constexpr double kReferenceCepsInf = 0.468;
inline constexpr double kReferenceCepsInfErr = 0.006;
inline constexpr double kReferenceC = 18.9;
inline constexpr double kReferenceCErr = 1.3;

struct FitCurvePoint {
  double inv_R_L = 0.0;
  double C_eps = 0.0;
};

/// `count` points of the fitted line on 1/R_L in [0, 1.05 max(1/R_L)].
std::vector<FitCurvePoint> fit_curve(const FitResult& fit, std::span<const SweepRow> rows,
                                     std::size_t count = 100);

/// Earliest sample time after which the local decay exponent
/// d ln E_tot / d ln t stays within `tolerance` of its window mean over
/// `span_decades` of time. Throws ErrorCode::transient_not_passed.
double fiducial_time(const RunRecord& decay, double tolerance = 0.02, double span_decades = 0.5);

struct DecayCoefficient {
  double t_e = 0.0;
  double C_eps = 0.0;
  double R_L = 0.0;
  double x = 0.0;
  /// (3/4) d g2 / d t~ at fixed x = r / L(t_e).
  double B2 = 0.0;
  double decay_exponent = 0.0;
};

/// Needs a record produced with EvolveParams::keep_snapshots. When t_e is not
/// given it is chosen by fiducial_time().
DecayCoefficient decay_dissipation_coefficient(const RunRecord& decay,
                                               std::optional<double> t_e = std::nullopt,
                                               double x = 0.1);

}  // namespace hitlab
