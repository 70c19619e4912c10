#include "hitlab/flux.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hitlab/error.hpp"

namespace hitlab {

std::vector<double> flux_values(const WavenumberGrid& grid, std::span<const double> T) {
  const std::size_t n = grid.size();
  if (T.size() != n) throw Error(ErrorCode::length_mismatch, "transfer length does not match grid");
  std::vector<double> Pi(n, 0.0);
  for (std::size_t m = 1; m < n; ++m) Pi[m] = -grid.integrate_to_node(T, m);
  return Pi;
}

ZeroCrossing zero_crossing(const WavenumberGrid& grid, std::span<const double> T) {
  const std::size_t n = grid.size();
  if (T.size() != n) throw Error(ErrorCode::length_mismatch, "transfer length does not match grid");
  ZeroCrossing best;
  double best_swing = -1.0;
  // Exact zeros (empty tail bins) are skipped: the comparison is against the
  // last non-zero value.
  std::size_t last = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (T[i] == 0.0) continue;
    if (last < n && (T[last] < 0.0) != (T[i] < 0.0)) {
      ++best.count;
      const double swing = std::abs(T[last]) + std::abs(T[i]);
      if (swing > best_swing) {
        best_swing = swing;
        const double la = std::log(grid.node(last)), lb = std::log(grid.node(i));
        const double f = T[last] / (T[last] - T[i]);
        best.k_star = std::exp(la + f * (lb - la));
        best.lower_node = last;
      }
    }
    last = i;
  }
  if (best.count == 0) throw Error(ErrorCode::no_sign_change, "transfer has no sign change");
  best.multiple = best.count > 1;
  return best;
}

ZeroCrossing zero_crossing(const TransferResult& transfer, const WavenumberGrid& grid) {
  return zero_crossing(grid, transfer.T);
}

PartitionedTransfer partitioned_transfer(const TransferResult& transfer,
                                         const WavenumberGrid& grid, double kappa) {
  const std::size_t n = grid.size();
  if (transfer.n != n) throw Error(ErrorCode::length_mismatch, "transfer does not match grid");
  const double tol = 1e-12 * grid.k_max();
  if (!(kappa >= grid.k_min() - tol && kappa <= grid.k_max() + tol)) {
    throw Error(ErrorCode::out_of_range, "kappa=" + std::to_string(kappa) + " outside the grid");
  }
  PartitionedTransfer out;
  out.kappa_node = grid.nearest_node(kappa);
  out.kappa = grid.node(out.kappa_node);
  const auto P = grid.partial_weights(out.kappa_node);
  const auto W = grid.weights();
  out.minus_minus.assign(n, 0.0);
  out.minus_plus.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double lower = 0.0, upper = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = transfer.S(i, j);
      lower += P[j] * s;
      upper += (W[j] - P[j]) * s;
    }
    out.minus_minus[i] = lower;
    out.minus_plus[i] = upper;
  }
  return out;
}

FluxProfile flux_profile(const TransferResult& transfer, const WavenumberGrid& grid,
                         double dissipation, double defect_tolerance) {
  const std::size_t n = grid.size();
  if (transfer.T.size() != n) {
    throw Error(ErrorCode::length_mismatch, "transfer length does not match grid");
  }
  const double total = grid.integrate(transfer.T);
  const double scale = dissipation > 0.0 ? dissipation : 1.0;
  if (std::abs(total) > defect_tolerance * scale) {
    throw Error(ErrorCode::conservation_violated,
                "int T dk = " + std::to_string(total) + " exceeds tolerance");
  }
  FluxProfile p;
  p.dissipation = dissipation;
  p.kappa.assign(grid.nodes().begin(), grid.nodes().end());
  p.T = transfer.T;
  p.Pi = flux_values(grid, transfer.T);
  p.Pi_backward.assign(n, 0.0);
  p.Pi_minus_plus.assign(n, 0.0);
  const bool have_density = transfer.S_density.size() == n * n;
  for (std::size_t m = 0; m < n; ++m) {
    p.Pi_backward[m] = total - grid.integrate_to_node(transfer.T, m);
    p.form_mismatch = std::max(p.form_mismatch, std::abs(p.Pi[m] - p.Pi_backward[m]) / scale);
    if (have_density && m > 0) {
      const auto part = partitioned_transfer(transfer, grid, grid.node(m));
      p.Pi_minus_plus[m] = -grid.integrate_to_node(part.minus_plus, m);
    } else if (!have_density) {
      p.Pi_minus_plus[m] = p.Pi[m];
    }
  }
  const auto peak = std::max_element(p.Pi.begin(), p.Pi.end());
  p.Pi_max = *peak;
  p.Pi_max_node = static_cast<std::size_t>(peak - p.Pi.begin());
  p.Pi_max_over_eps = dissipation > 0.0 ? p.Pi_max / dissipation : 0.0;
  try {
    const auto zc = zero_crossing(grid, transfer.T);
    p.has_crossing = true;
    p.k_star = zc.k_star;
    p.k_star_node = grid.nearest_node(zc.k_star);
    p.multiple_crossings = zc.multiple;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::no_sign_change) throw;
  }
  return p;
}

}  // namespace hitlab
