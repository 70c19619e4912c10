#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hitlab {

/// Result of a partial quadrature: the upper limit is snapped to a node and
/// the node actually used is reported alongside the value.
struct PartialIntegral {
  double value = 0.0;
  std::size_t node = 0;
  double kappa_used = 0.0;
};

/// Geometric (log-uniform) wavenumber mesh with its quadrature.
///
/// The integral over each cell [k_i, k_{i+1}] is the exact integral of the
/// cubic interpolant through the four surrounding nodes (one-sided at the
/// ends). Full and partial integrals are sums of these cell functionals, so
/// partial(kappa) + complement(kappa) == full in the discrete rule. When a
/// very coarse mesh would produce a non-positive aggregated weight the
/// trapezoid rule is used instead. Immutable after construction.
class WavenumberGrid {
 public:
  /// Throws ErrorCode::invalid_range unless 0 < k_min < k_max and n_bins >= 2.
  static WavenumberGrid make(double k_min, double k_max, std::size_t n_bins);

  double k_min() const noexcept { return nodes_.front(); }
  double k_max() const noexcept { return nodes_.back(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  /// Constant ratio nodes[i+1] / nodes[i].
  double ratio() const noexcept { return ratio_; }
  double log_spacing() const noexcept { return log_step_; }
  bool uses_cubic_rule() const noexcept { return cubic_; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double node(std::size_t i) const { return nodes_.at(i); }

  double integrate(std::span<const double> samples) const;

  /// Integral over [k_min, kappa], kappa snapped to the nearest node.
  PartialIntegral partial_integrate(std::span<const double> samples, double kappa) const;

  /// Integral over [k_min, nodes[m]].
  double integrate_to_node(std::span<const double> samples, std::size_t m) const;

  /// Weights w such that integrate_to_node(f, m) == sum_i w[i] f[i].
  std::vector<double> partial_weights(std::size_t m) const;

  std::size_t nearest_node(double k) const;

  /// Index of the cell [nodes[c], nodes[c+1]] containing k (clamped).
  std::size_t cell_of(double k) const noexcept;

  /// Content hash of the node positions (FNV-1a over the IEEE bytes).
  std::uint64_t hash() const noexcept;

 private:
  struct CellRule {
    std::size_t first = 0;
    std::size_t count = 0;
    std::array<double, 4> coeff{};
  };

  WavenumberGrid() = default;
  void check_length(std::span<const double> samples) const;

  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<CellRule> cells_;
  double ratio_ = 1.0;
  double log_step_ = 0.0;
  bool cubic_ = false;
};

}  // namespace hitlab
