#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hitlab/closure.hpp"
#include "hitlab/dissipation_law.hpp"
#include "hitlab/evolve.hpp"
#include "hitlab/rg.hpp"
#include "hitlab/scaling.hpp"
#include "hitlab/spectra.hpp"
#include "hitlab/temporal.hpp"
#include "json.hpp"

namespace hitlab::app {

inline constexpr int kSchemaVersion = 1;

struct GridBlock {
  double k_min = 1.0;
  std::size_t n_bins = 96;
  /// Explicit upper end; 0 derives it as k_max_factor * (eps / nu^3)^(1/4).
  double k_max = 0.0;
  double k_max_factor = 2.5;
};

struct IntegratorBlock {
  double dt_safety = 0.25;
  double dt_max = 0.0;
  double sample_interval = 0.5;
  double balance_tolerance = 0.01;
  double stationarity_tolerance = 0.01;
  double stationarity_turnovers = 2.0;
  double drift_tolerance = 1e-3;
  std::size_t max_steps = 50'000'000;
};

struct DecayBlock {
  double t_end = 20.0;
  /// r / L at which the decay coefficient B2 is evaluated.
  double x = 0.1;
};

struct ForcedBlock {
  double max_time = 200.0;
};

struct AnalysisBlock {
  int r_per_decade = 48;
};

struct SweepBlock {
  std::vector<double> nu;
};

struct FitBlock {
  /// Sweep table to fit; empty means <out>/sweep.csv.
  std::string input;
  bool quadratic = false;
};

struct CollapseBlock {
  std::vector<std::string> inputs;
  CollapseMode mode = CollapseMode::k41;
  double mu = 0.1;
  /// Per-input external scales for K62; empty applies the box policy.
  std::vector<double> external_scales;
  /// 0 selects 2 pi / k_min of the first input.
  double box_scale = 0.0;
  double spread = 8.0;
  double k_hat_min = 0.05;
  std::size_t shared_points = 64;
};

struct TemporalBlock {
  EnsembleConfig ensemble;
  WindowKind window = WindowKind::hann;
};

struct RgBlock {
  RgConfig rg;
  /// Optional bandwidth scan.
  std::vector<double> h_values;
  /// Dissipation fraction defining the effective cutoff k0.
  double cutoff_capture = 0.999;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string output_dir = "out";
  double nu = 1e-3;
  GridBlock grid;
  InitialSpectrumShape initial{2.0, 1.0, 4};
  ClosureParams closure;
  ForcingSpec forcing{ForcingMode::band, 2.0, 1.0};
  IntegratorBlock integrator;
  DecayBlock decay;
  ForcedBlock forced;
  AnalysisBlock analysis;
  SweepBlock sweep;
  FitBlock fit;
  CollapseBlock collapse;
  TemporalBlock temporal;
  RgBlock rg;
};

/// Parses a JSON config (comments allowed). Missing keys keep their
/// defaults; unknown keys and type mismatches throw ErrorCode::config_invalid
/// naming the offending path.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Resolved config as written into manifests. Execution-only settings
/// (workers, output directory) are left out so that outputs do not depend
/// on them.
nlohmann::ordered_json config_to_json(const RunConfig& config);

EvolveParams evolve_params(const RunConfig& config);

/// Per-run setup for sweeps (and any forced run on a k_max_factor grid).
SweepConfig sweep_config(const RunConfig& config);

/// Upper grid end for a run at viscosity nu with dissipation scale eps.
double resolved_k_max(const RunConfig& config, double nu, double eps);

}  // namespace hitlab::app
