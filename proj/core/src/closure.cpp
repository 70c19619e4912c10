#include "hitlab/closure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <string>

#include "hitlab/error.hpp"
#include "hitlab/parallel.hpp"

namespace hitlab {
namespace {

constexpr double kGaussAbscissa = 0.57735026918962576451;  // 1/sqrt(3)

void check_spectrum(const SpectralState& state) {
  if (!state.grid) throw Error(ErrorCode::invalid_range, "state has no grid");
  if (state.E.size() != state.grid->size()) {
    throw Error(ErrorCode::length_mismatch, "spectrum length does not match grid");
  }
  for (double e : state.E) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw Error(ErrorCode::invalid_range, "energy spectrum must be finite and non-negative");
    }
  }
  if (!(state.nu >= 0.0)) throw Error(ErrorCode::invalid_range, "negative viscosity");
}

// Per-evaluation node tables shared by every triad sample.
struct NodeTables {
  std::vector<double> E;
  std::vector<double> logE;
  std::vector<bool> positive;
  std::vector<double> mu;

  double energy_at(const TransferOperator::Sample& s) const {
    const std::size_t m = s.cell;
    if (positive[m] && positive[m + 1]) {
      return E[m] * std::exp(s.log_frac * (logE[m + 1] - logE[m]));
    }
    return E[m] + s.lin_frac * (E[m + 1] - E[m]);
  }
  double damping_at(const TransferOperator::Sample& s) const {
    const std::size_t m = s.cell;
    return mu[m] + s.lin_frac * (mu[m + 1] - mu[m]);
  }
};

NodeTables make_tables(const SpectralState& state, const ClosureParams& params) {
  NodeTables t;
  t.E = state.E;
  const std::size_t n = t.E.size();
  t.logE.assign(n, 0.0);
  t.positive.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.E[i] > 0.0) {
      t.positive[i] = true;
      t.logE[i] = std::log(t.E[i]);
    }
  }
  t.mu = eddy_damping(state, params);
  return t;
}

double markov_factor(double rate, const ClosureParams& params) {
  if (params.markov_time_mode == MarkovTimeMode::asymptotic) return 1.0 / rate;
  const double x = rate * params.elapsed_time;
  if (x < 1e-8) return params.elapsed_time * (1.0 - 0.5 * x);
  return -std::expm1(-x) / rate;
}

// Integral over q of theta(k,p,q) (xy + z^3)/q E(q) for one ordered pair.
double pair_kernel(const TransferOperator::Sample* first, const TransferOperator::Sample* last,
                   double mu_k, double mu_p, double nu, const NodeTables& tab,
                   const ClosureParams& params) {
  double sum = 0.0;
  for (const auto* s = first; s != last; ++s) {
    const double rate = mu_k + mu_p + tab.damping_at(*s) + nu * s->sumsq;
    if (!(rate > 0.0)) {
      if (params.markov_time_mode == MarkovTimeMode::finite_time) {
        sum += s->weight * params.elapsed_time * tab.energy_at(*s);
      }
      // Asymptotic mode with zero rate only happens when E(q) == 0 everywhere.
      continue;
    }
    sum += s->weight * markov_factor(rate, params) * tab.energy_at(*s);
  }
  return sum;
}

double interpolate_node_value(const WavenumberGrid& grid, std::span<const double> v, double k,
                              bool log_linear) {
  const std::size_t nn = grid.nearest_node(k);
  if (std::abs(k - grid.node(nn)) <= 1e-12 * k) return v[nn];
  const std::size_t c = grid.cell_of(k);
  const double a = grid.node(c), b = grid.node(c + 1);
  if (log_linear && v[c] > 0.0 && v[c + 1] > 0.0) {
    const double f = std::log(k / a) / std::log(b / a);
    return v[c] * std::exp(f * std::log(v[c + 1] / v[c]));
  }
  return v[c] + (k - a) / (b - a) * (v[c + 1] - v[c]);
}

void check_inside(const WavenumberGrid& grid, double k, const char* what) {
  const double tol = 1e-12 * grid.k_max();
  if (!(k >= grid.k_min() - tol) || !(k <= grid.k_max() + tol)) {
    throw Error(ErrorCode::out_of_range,
                std::string(what) + "=" + std::to_string(k) + " outside the grid");
  }
}

}  // namespace

std::vector<double> eddy_damping(const SpectralState& state, const ClosureParams& params) {
  check_spectrum(state);
  const WavenumberGrid& g = state.mesh();
  const std::size_t n = g.size();
  const auto k = g.nodes();
  std::vector<double> k2E(n);
  for (std::size_t i = 0; i < n; ++i) k2E[i] = k[i] * k[i] * state.E[i];
  // Cumulative enstrophy through successive cells; the running maximum keeps
  // mu monotone even if a cubic cell functional dips below zero.
  std::vector<double> mu(n, 0.0);
  double cumulative = 0.0;
  double previous = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double upto = g.integrate_to_node(k2E, i);
    cumulative = std::max(previous, upto);
    previous = cumulative;
    mu[i] = params.damping_constant * std::sqrt(std::max(0.0, cumulative));
  }
  return mu;
}

double triad_time(double k, double p, double q, const SpectralState& state,
                  const ClosureParams& params) {
  const double scale = std::max({k, p, q});
  const double tol = 1e-12 * scale;
  if (!(k > 0.0 && p > 0.0 && q > 0.0) || q < std::abs(k - p) - tol || q > k + p + tol) {
    throw Error(ErrorCode::not_triangle, "(" + std::to_string(k) + ", " + std::to_string(p) +
                                             ", " + std::to_string(q) +
                                             ") is not a triangle");
  }
  const auto mu = eddy_damping(state, params);
  const WavenumberGrid& g = state.mesh();
  auto mu_at = [&](double x) {
    x = std::clamp(x, g.k_min(), g.k_max());
    return interpolate_node_value(g, mu, x, false);
  };
  const double rate = mu_at(k) + mu_at(p) + mu_at(q) + state.nu * (k * k + p * p + q * q);
  if (params.markov_time_mode == MarkovTimeMode::finite_time && !(rate > 0.0)) {
    return params.elapsed_time;
  }
  return markov_factor(rate, params);
}

void TransferOperator::build_samples(const WavenumberGrid& grid, double k, double p,
                                     std::vector<Sample>& out) {
  const double q_lo = std::max(std::abs(k - p), grid.k_min());
  const double q_hi = std::min(k + p, grid.k_max());
  if (!(q_hi > q_lo)) return;
  const std::size_t c0 = grid.cell_of(q_lo);
  const std::size_t c1 = grid.cell_of(q_hi);
  const double log_step = grid.log_spacing();
  for (std::size_t c = c0; c <= c1; ++c) {
    const double left = grid.node(c), right = grid.node(c + 1);
    const double a = std::max(left, q_lo);
    const double b = std::min(right, q_hi);
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (double xi : {-kGaussAbscissa, kGaussAbscissa}) {
      const double q = mid + half * xi;
      const double x = (p * p + q * q - k * k) / (2.0 * p * q);
      const double y = (k * k + q * q - p * p) / (2.0 * k * q);
      const double z = (k * k + p * p - q * q) / (2.0 * k * p);
      Sample s;
      s.cell = static_cast<std::uint32_t>(c);
      s.lin_frac = (q - left) / (right - left);
      s.log_frac = std::log(q / left) / log_step;
      s.weight = half * (x * y + z * z * z) / q;
      s.sumsq = k * k + p * p + q * q;
      out.push_back(s);
    }
  }
}

TransferOperator::TransferOperator(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw Error(ErrorCode::invalid_range, "transfer operator needs a grid");
  const std::size_t n = grid_->size();
  begin_.assign(n * n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      begin_[i * n + j] = static_cast<std::uint32_t>(samples_.size());
      if (j > i) build_samples(*grid_, grid_->node(i), grid_->node(j), samples_);
    }
  }
  begin_[n * n] = static_cast<std::uint32_t>(samples_.size());
}

TransferResult TransferOperator::evaluate(const SpectralState& state,
                                          const ClosureParams& params) const {
  check_spectrum(state);
  const std::size_t n = grid_->size();
  if (state.grid->size() != n || state.grid->hash() != grid_->hash()) {
    throw Error(ErrorCode::invalid_range, "state grid differs from the operator grid");
  }
  TransferResult r;
  r.n = n;
  r.T.assign(n, 0.0);
  r.S_density.assign(n * n, 0.0);
  r.input.assign(n, 0.0);
  r.sink_rate.assign(n, 0.0);
  if (!params.enabled) return r;

  const NodeTables tab = make_tables(state, params);
  const auto k = grid_->nodes();
  const auto W = grid_->weights();
  std::vector<double> Q(n * n, 0.0);  // symmetric triad kernel

  parallel_for(n, params.workers, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t pair = i * n + j;
      const Sample* first = samples_.data() + begin_[pair];
      const Sample* last = samples_.data() + begin_[pair + 1];
      const double q = pair_kernel(first, last, tab.mu[i], tab.mu[j], state.nu, tab, params);
      if (!std::isfinite(q)) {
        throw Error(ErrorCode::quadrature_failure,
                    "non-finite triad integral at pair (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
      Q[pair] = q;
      const double s = (k[i] * k[i] * tab.E[j] - k[j] * k[j] * tab.E[i]) * q;
      r.S_density[pair] = s;
      r.S_density[j * n + i] = -s;
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) Q[i * n + j] = Q[j * n + i];
  }

  // Fixed ascending-j summation order keeps T bit-reproducible for any
  // worker count.
  for (std::size_t i = 0; i < n; ++i) {
    double t = 0.0, in = 0.0, sink = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      t += W[j] * r.S_density[i * n + j];
      in += W[j] * tab.E[j] * Q[i * n + j];
      sink += W[j] * k[j] * k[j] * Q[i * n + j];
    }
    r.T[i] = t;
    r.input[i] = k[i] * k[i] * in;
    r.sink_rate[i] = sink;
  }
  r.net_transfer = grid_->integrate(r.T);
  const double eps = dissipation_rate(state);
  r.conservation_defect = eps > 0.0 ? r.net_transfer / eps : r.net_transfer;
  return r;
}

std::shared_ptr<const TransferOperator> transfer_operator_for(const GridPtr& grid) {
  static std::mutex mutex;
  static std::deque<std::shared_ptr<const TransferOperator>> cache;
  constexpr std::size_t kCapacity = 24;
  const std::uint64_t key = grid->hash();
  {
    std::lock_guard<std::mutex> lock(mutex);
    for (const auto& op : cache) {
      if (op->grid().size() == grid->size() && op->grid().hash() == key) return op;
    }
  }
  auto op = std::make_shared<const TransferOperator>(grid);
  std::lock_guard<std::mutex> lock(mutex);
  cache.push_back(op);
  if (cache.size() > kCapacity) cache.pop_front();
  return op;
}

TransferResult transfer_spectrum(const SpectralState& state, const ClosureParams& params) {
  check_spectrum(state);
  if (!params.enabled) {
    TransferResult r;
    r.n = state.size();
    r.T.assign(r.n, 0.0);
    r.S_density.assign(r.n * r.n, 0.0);
    r.input.assign(r.n, 0.0);
    r.sink_rate.assign(r.n, 0.0);
    return r;
  }
  return transfer_operator_for(state.grid)->evaluate(state, params);
}

double transfer_density(const SpectralState& state, const ClosureParams& params, double k,
                        double j) {
  check_spectrum(state);
  const WavenumberGrid& g = state.mesh();
  check_inside(g, k, "k");
  check_inside(g, j, "j");
  if (k == j || !params.enabled) return 0.0;
  const bool swapped = k > j;
  const double a = swapped ? j : k;
  const double b = swapped ? k : j;

  const NodeTables tab = make_tables(state, params);
  std::vector<TransferOperator::Sample> samples;
  TransferOperator::build_samples(g, a, b, samples);
  const double mu_a = interpolate_node_value(g, tab.mu, a, false);
  const double mu_b = interpolate_node_value(g, tab.mu, b, false);
  const double q = pair_kernel(samples.data(), samples.data() + samples.size(), mu_a, mu_b,
                               state.nu, tab, params);
  const double Ea = interpolate_node_value(g, state.E, a, true);
  const double Eb = interpolate_node_value(g, state.E, b, true);
  const double s = (a * a * Eb - b * b * Ea) * q;
  return swapped ? -s : s;
}

}  // namespace hitlab
