#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hitlab/closure.hpp"

namespace hitlab {

/// Flux through every node: Pi(k_m) = -int_{k_min}^{k_m} T dk.
std::vector<double> flux_values(const WavenumberGrid& grid, std::span<const double> T);

struct ZeroCrossing {
  double k_star = 0.0;
  /// Lower node of the bracketing cell.
  std::size_t lower_node = 0;
  std::size_t count = 0;
  bool multiple = false;
};

/// Root of T between two nodes of opposite sign, interpolated linearly in
/// log k. With several sign changes the one with the largest |T| swing wins
/// and the result is flagged. Throws ErrorCode::no_sign_change.
ZeroCrossing zero_crossing(const WavenumberGrid& grid, std::span<const double> T);
ZeroCrossing zero_crossing(const TransferResult& transfer, const WavenumberGrid& grid);

struct FluxProfile {
  std::vector<double> kappa;
  std::vector<double> Pi;            // -int_0^kappa T
  std::vector<double> Pi_backward;   // int_kappa^inf T
  std::vector<double> Pi_minus_plus; // -int_0^kappa T^{-+}
  std::vector<double> T;
  double k_star = 0.0;
  std::size_t k_star_node = 0;
  bool has_crossing = false;
  bool multiple_crossings = false;
  double Pi_max = 0.0;
  std::size_t Pi_max_node = 0;
  double Pi_max_over_eps = 0.0;
  double dissipation = 0.0;
  /// max_m |Pi - Pi_backward| / eps.
  double form_mismatch = 0.0;
};

/// Builds the profile of the given transfer evaluation. `dissipation` is the
/// eps used for normalization. Throws ErrorCode::conservation_violated when
/// |int T| exceeds defect_tolerance * eps.
FluxProfile flux_profile(const TransferResult& transfer, const WavenumberGrid& grid,
                         double dissipation, double defect_tolerance = 1e-8);

/// Split of T at a node kappa by the partner wavenumber. Vectors span the
/// whole grid: rows with k <= kappa are the physical ones, the rest are the
/// same sums continued so that the discrete partial rule (whose stencil may
/// touch the node after kappa) can integrate them.
struct PartitionedTransfer {
  std::size_t kappa_node = 0;
  double kappa = 0.0;
  std::vector<double> minus_minus;
  std::vector<double> minus_plus;
};

/// Throws ErrorCode::out_of_range when kappa lies outside the grid.
PartitionedTransfer partitioned_transfer(const TransferResult& transfer,
                                         const WavenumberGrid& grid, double kappa);

}  // namespace hitlab
