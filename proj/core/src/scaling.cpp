#include "hitlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hitlab/error.hpp"

namespace hitlab {

RescaledSpectrum kolmogorov_rescale(const SpectralState& state) {
  const ScalarDiagnostics d = diagnostics(state);
  const double kd = d.kolmogorov_wavenumber;
  const double ev = std::pow(d.dissipation * std::pow(state.nu, 5), 0.25);
  RescaledSpectrum t;
  const auto k = state.mesh().nodes();
  t.k_hat.resize(k.size());
  t.E_hat.resize(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    t.k_hat[i] = k[i] / kd;
    t.E_hat[i] = state.E[i] / ev;
  }
  return t;
}

RescaledSpectrum kolmogorov_unscale(const RescaledSpectrum& table, double eps, double nu) {
  if (!(eps > 0.0) || !(nu > 0.0)) throw Error(ErrorCode::invalid_range, "eps and nu must be positive");
  const double kd = std::pow(eps / (nu * nu * nu), 0.25);
  const double ev = std::pow(eps * std::pow(nu, 5), 0.25);
  RescaledSpectrum out;
  out.k_hat.resize(table.k_hat.size());
  out.E_hat.resize(table.E_hat.size());
  for (std::size_t i = 0; i < table.k_hat.size(); ++i) {
    out.k_hat[i] = table.k_hat[i] * kd;
    out.E_hat[i] = table.E_hat[i] * ev;
  }
  return out;
}

RescaledSpectrum k62_rescale(const SpectralState& state, double mu, double external_scale) {
  if (!(mu >= 0.0)) throw Error(ErrorCode::invalid_range, "mu must be non-negative");
  if (!(external_scale > 0.0)) throw Error(ErrorCode::invalid_range, "external scale must be positive");
  RescaledSpectrum t = kolmogorov_rescale(state);
  if (mu == 0.0) return t;
  const auto k = state.mesh().nodes();
  for (std::size_t i = 0; i < k.size(); ++i) t.E_hat[i] *= std::pow(k[i] * external_scale, mu);
  return t;
}

namespace {

// ln E_hat at ln k_hat by linear interpolation; the table is increasing in k.
double log_value_at(const RescaledSpectrum& t, double lk) {
  const auto& k = t.k_hat;
  auto it = std::upper_bound(k.begin(), k.end(), std::exp(lk));
  std::size_t hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - k.begin(), 1,
                                                                      static_cast<std::ptrdiff_t>(k.size() - 1)));
  const std::size_t lo = hi - 1;
  const double a = std::log(k[lo]), b = std::log(k[hi]);
  const double f = (lk - a) / (b - a);
  return std::log(t.E_hat[lo]) + f * (std::log(t.E_hat[hi]) - std::log(t.E_hat[lo]));
}

}  // namespace

CollapseReport collapse_error(std::span<const SpectralState> states, const CollapseOptions& options) {
  if (states.size() < 2) throw Error(ErrorCode::insufficient_data, "collapse needs at least two states");
  if (options.mode == CollapseMode::k62 && options.external_scales.size() != states.size()) {
    throw Error(ErrorCode::length_mismatch, "one external scale per state is required");
  }
  if (options.shared_points < 2) throw Error(ErrorCode::invalid_range, "shared grid too small");
  CollapseReport rep;
  rep.mode = options.mode;
  rep.mu = options.mode == CollapseMode::k62 ? options.mu : 0.0;
  double lo = options.k_hat_min, hi = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < states.size(); ++s) {
    RescaledSpectrum t = options.mode == CollapseMode::k41
                             ? kolmogorov_rescale(states[s])
                             : k62_rescale(states[s], options.mu, options.external_scales[s]);
    // Support of the table: nodes with positive energy.
    double first = 0.0, last = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < t.k_hat.size(); ++i) {
      if (t.E_hat[i] > 0.0) {
        if (!any) first = t.k_hat[i];
        last = t.k_hat[i];
        any = true;
      } else if (any) {
        break;
      }
    }
    if (!any) throw Error(ErrorCode::degenerate_spectrum, "state has no energy");
    lo = std::max(lo, first);
    hi = std::min(hi, last);
    rep.tables.push_back(std::move(t));
  }
  if (!(hi > lo)) throw Error(ErrorCode::empty_window, "states share no k_hat window");
  rep.window_lo = lo;
  rep.window_hi = hi;
  rep.is_void = hi < lo * std::sqrt(10.0);

  const std::size_t m = options.shared_points;
  std::vector<std::vector<double>> logs(states.size(), std::vector<double>(m));
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      const double lk = std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(j) /
                                           static_cast<double>(m - 1);
      logs[s][j] = log_value_at(rep.tables[s], lk);
    }
  }
  for (std::size_t a = 0; a < states.size(); ++a) {
    for (std::size_t b = a + 1; b < states.size(); ++b) {
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double d = logs[a][j] - logs[b][j];
        sum += d * d;
      }
      const double dist = std::sqrt(sum / static_cast<double>(m));
      rep.pairwise.push_back({a, b, dist});
      rep.collapse_error = std::max(rep.collapse_error, dist);
    }
  }
  return rep;
}

std::vector<double> external_scales_by_reynolds(std::span<const SpectralState> states,
                                                double box_scale, double spread) {
  if (!(box_scale > 0.0) || !(spread >= 1.0)) {
    throw Error(ErrorCode::invalid_range, "bad external-scale policy");
  }
  const std::size_t n = states.size();
  std::vector<double> re(n);
  for (std::size_t i = 0; i < n; ++i) re[i] = diagnostics(states[i]).taylor_reynolds;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return re[a] < re[b]; });
  std::vector<double> L(n, box_scale);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const double f = n > 1 ? static_cast<double>(rank) / static_cast<double>(n - 1) : 0.0;
    L[order[rank]] = box_scale * std::pow(spread, f);
  }
  return L;
}

std::string to_string(CollapseMode mode) { return mode == CollapseMode::k41 ? "k41" : "k62"; }

}  // namespace hitlab
