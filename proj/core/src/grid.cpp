#include "hitlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "hitlab/error.hpp"

namespace hitlab {
namespace {

// Integral over the unit interval [0, 1] of the Lagrange basis polynomials
// through the local abscissae t[0..n). Polynomials are expanded by repeated
// multiplication of monomials (n <= 4).
std::array<double, 4> unit_cell_weights(const std::array<double, 4>& t, std::size_t n) {
  std::array<double, 4> out{};
  for (std::size_t j = 0; j < n; ++j) {
    std::array<double, 5> poly{};  // poly[d] is the coefficient of t^d
    poly[0] = 1.0;
    std::size_t degree = 0;
    double denom = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      for (std::size_t d = degree + 1; d > 0; --d) {
        poly[d] = poly[d - 1] - t[m] * poly[d];
      }
      poly[0] = -t[m] * poly[0];
      ++degree;
      denom *= t[j] - t[m];
    }
    double integral = 0.0;
    for (std::size_t d = 0; d <= degree; ++d) integral += poly[d] / static_cast<double>(d + 1);
    out[j] = integral / denom;
  }
  return out;
}

}  // namespace

WavenumberGrid WavenumberGrid::make(double k_min, double k_max, std::size_t n_bins) {
  if (!(k_min > 0.0) || !(k_max > k_min) || !std::isfinite(k_max) || n_bins < 2) {
    throw Error(ErrorCode::invalid_range,
                "grid requires 0 < k_min < k_max and n_bins >= 2 (got k_min=" +
                    std::to_string(k_min) + ", k_max=" + std::to_string(k_max) +
                    ", n_bins=" + std::to_string(n_bins) + ")");
  }
  WavenumberGrid g;
  const std::size_t n = n_bins;
  g.log_step_ = std::log(k_max / k_min) / static_cast<double>(n - 1);
  g.ratio_ = std::exp(g.log_step_);
  g.nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.nodes_[i] = k_min * std::exp(g.log_step_ * static_cast<double>(i));
  }
  g.nodes_.front() = k_min;
  g.nodes_.back() = k_max;

  auto build = [&](bool cubic) {
    g.cells_.assign(n - 1, CellRule{});
    g.weights_.assign(n, 0.0);
    for (std::size_t c = 0; c + 1 < n; ++c) {
      CellRule rule;
      if (cubic) {
        rule.count = 4;
        rule.first = std::min(c > 0 ? c - 1 : 0, n - 4);
      } else {
        rule.count = 2;
        rule.first = c;
      }
      const double a = g.nodes_[c];
      const double h = g.nodes_[c + 1] - a;
      std::array<double, 4> t{};
      for (std::size_t m = 0; m < rule.count; ++m) t[m] = (g.nodes_[rule.first + m] - a) / h;
      const auto w = unit_cell_weights(t, rule.count);
      for (std::size_t m = 0; m < rule.count; ++m) {
        rule.coeff[m] = h * w[m];
        g.weights_[rule.first + m] += rule.coeff[m];
      }
      g.cells_[c] = rule;
    }
  };

  g.cubic_ = n >= 4;
  if (g.cubic_) {
    build(true);
    if (std::any_of(g.weights_.begin(), g.weights_.end(), [](double w) { return w <= 0.0; })) {
      g.cubic_ = false;
    }
  }
  if (!g.cubic_) build(false);
  return g;
}

void WavenumberGrid::check_length(std::span<const double> samples) const {
  if (samples.size() != nodes_.size()) {
    throw Error(ErrorCode::length_mismatch,
                "expected " + std::to_string(nodes_.size()) + " samples, got " +
                    std::to_string(samples.size()));
  }
}

double WavenumberGrid::integrate(std::span<const double> samples) const {
  return integrate_to_node(samples, nodes_.size() - 1);
}

double WavenumberGrid::integrate_to_node(std::span<const double> samples, std::size_t m) const {
  check_length(samples);
  if (m >= nodes_.size()) {
    throw Error(ErrorCode::out_of_range, "node index " + std::to_string(m) + " beyond grid");
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const CellRule& rule = cells_[c];
    double cell = 0.0;
    for (std::size_t j = 0; j < rule.count; ++j) cell += rule.coeff[j] * samples[rule.first + j];
    sum += cell;
  }
  return sum;
}

std::vector<double> WavenumberGrid::partial_weights(std::size_t m) const {
  if (m >= nodes_.size()) {
    throw Error(ErrorCode::out_of_range, "node index " + std::to_string(m) + " beyond grid");
  }
  std::vector<double> w(nodes_.size(), 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    const CellRule& rule = cells_[c];
    for (std::size_t j = 0; j < rule.count; ++j) w[rule.first + j] += rule.coeff[j];
  }
  return w;
}

PartialIntegral WavenumberGrid::partial_integrate(std::span<const double> samples,
                                                  double kappa) const {
  check_length(samples);
  const double tol = 1e-12 * k_max();
  if (!(kappa >= k_min() - tol) || !(kappa <= k_max() + tol)) {
    throw Error(ErrorCode::out_of_range, "kappa=" + std::to_string(kappa) +
                                             " outside [k_min, k_max]");
  }
  PartialIntegral out;
  out.node = nearest_node(kappa);
  out.kappa_used = nodes_[out.node];
  out.value = integrate_to_node(samples, out.node);
  return out;
}

std::size_t WavenumberGrid::nearest_node(double k) const {
  if (k <= nodes_.front()) return 0;
  if (k >= nodes_.back()) return nodes_.size() - 1;
  const double pos = std::log(k / nodes_.front()) / log_step_;
  auto i = static_cast<std::size_t>(std::floor(pos));
  i = std::min(i, nodes_.size() - 2);
  // Nearest in log k, which is the natural metric on a geometric mesh.
  return (std::log(k / nodes_[i]) <= std::log(nodes_[i + 1] / k)) ? i : i + 1;
}

std::size_t WavenumberGrid::cell_of(double k) const noexcept {
  if (k <= nodes_.front()) return 0;
  if (k >= nodes_.back()) return nodes_.size() - 2;
  auto c = static_cast<std::size_t>(std::floor(std::log(k / nodes_.front()) / log_step_));
  c = std::min(c, nodes_.size() - 2);
  if (k < nodes_[c] && c > 0) --c;
  if (k > nodes_[c + 1] && c + 2 < nodes_.size()) ++c;
  return c;
}

std::uint64_t WavenumberGrid::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (double x : nodes_) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace hitlab
