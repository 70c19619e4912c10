#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "hitlab/spectra.hpp"

namespace hitlab {

enum class MarkovTimeMode { asymptotic, finite_time };

/// EDQNM parameters. The eddy damping is mu(k) = lambda sqrt(int_0^k s^2 E ds).
struct ClosureParams {
  double damping_constant = 0.36;
  MarkovTimeMode markov_time_mode = MarkovTimeMode::asymptotic;
  /// Elapsed time used by the finite-time Markovian factor.
  double elapsed_time = 0.0;
  /// When false the transfer is identically zero (pure viscous dynamics).
  bool enabled = true;
  /// Threads used for the row loop of the transfer evaluation.
  std::size_t workers = 1;
};

/// One evaluation of the nonlinear transfer.
struct TransferResult {
  std::size_t n = 0;
  std::vector<double> T;
  /// Row-major n x n table of the transfer density S(k_i, k_j); S_ji = -S_ij.
  std::vector<double> S_density;
  /// T = input - E * sink_rate (the output-side term factored out of E).
  std::vector<double> input;
  std::vector<double> sink_rate;
  /// int T dk divided by the dissipation of the evaluated state.
  double conservation_defect = 0.0;
  double net_transfer = 0.0;

  double S(std::size_t i, std::size_t j) const { return S_density[i * n + j]; }
};

std::vector<double> eddy_damping(const SpectralState& state, const ClosureParams& params);

/// Markovian triad relaxation time theta_kpq. Throws ErrorCode::not_triangle
/// unless |k - p| <= q <= k + p.
double triad_time(double k, double p, double q, const SpectralState& state,
                  const ClosureParams& params);

TransferResult transfer_spectrum(const SpectralState& state, const ClosureParams& params);

/// S(k, j) for wavenumbers inside the grid. Computed for the ordered pair
/// k < j and negated for the swapped call, so S(k,j) + S(j,k) == 0 exactly.
double transfer_density(const SpectralState& state, const ClosureParams& params, double k,
                        double j);

/// Precomputed triad quadrature for one grid. transfer_spectrum() keeps a
/// process-wide cache of these keyed by grid identity.
class TransferOperator {
 public:
  explicit TransferOperator(GridPtr grid);

  TransferResult evaluate(const SpectralState& state, const ClosureParams& params) const;
  const WavenumberGrid& grid() const { return *grid_; }
  std::size_t sample_count() const noexcept { return samples_.size(); }

  struct Sample {
    std::uint32_t cell = 0;
    double log_frac = 0.0;  // position of q inside its cell in log k
    double lin_frac = 0.0;  // position of q inside its cell in k
    double weight = 0.0;    // Gauss weight * (xy + z^3) / q
    double sumsq = 0.0;     // k^2 + p^2 + q^2
  };

  /// Appends the q-quadrature samples for the triangle legs (k, p).
  static void build_samples(const WavenumberGrid& grid, double k, double p,
                            std::vector<Sample>& out);

 private:
  GridPtr grid_;
  std::vector<Sample> samples_;
  std::vector<std::uint32_t> begin_;  // n*n + 1 offsets; only i < j pairs are populated
};

std::shared_ptr<const TransferOperator> transfer_operator_for(const GridPtr& grid);

}  // namespace hitlab
