#include "hitlab/temporal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include "hitlab/error.hpp"
#include "hitlab/fitting.hpp"
#include "hitlab/grid.hpp"
#include "hitlab/parallel.hpp"

namespace hitlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Engine for one realization, keyed by (seed, index) only.
std::mt19937_64 realization_engine(std::uint64_t seed, std::size_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1)));
}

// Uniform in [0, 1) and standard normal draws built from raw engine output so
// the streams do not depend on the standard library's distributions.
double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Box-Muller pairs; the second value of each pair is cached.
class NormalStream {
 public:
  explicit NormalStream(std::mt19937_64& g) : g_(g) {}
  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = uniform01(g_);
    while (u1 <= 0.0) u1 = uniform01(g_);
    const double u2 = uniform01(g_);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    cached_ = rad * std::sin(kTwoPi * u2);
    have_ = true;
    return rad * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64& g_;
  double cached_ = 0.0;
  bool have_ = false;
};

double sweep_rms(const EnsembleConfig& c, std::span<const Mode> modes) {
  return c.sweep_velocity > 0.0 ? c.sweep_velocity : std::sqrt(mode_variance(modes));
}

double fastest_rate(const EnsembleConfig& c, std::span<const Mode> modes) {
  double r = 0.0;
  for (const auto& m : modes) r = std::max(r, m.rate);
  if (c.model == DecorrelationModel::kolmogorov) return r * (1.0 + 3.0 * c.rate_noise);
  return c.random_sweep ? 3.0 * r : r;
}

double slowest_rate(std::span<const Mode> modes) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& m : modes) r = std::min(r, m.rate);
  return r;
}

struct FftwPlan {
  std::size_t n;
  fftw_plan plan;
};

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::string to_string(DecorrelationModel model) {
  return model == DecorrelationModel::kolmogorov ? "kolmogorov" : "sweeping";
}

std::vector<Mode> build_modes(const EnsembleConfig& c) {
  if (!(c.k_lo > 0.0) || !(c.k_hi > c.k_lo) || c.n_modes < 2) {
    throw Error(ErrorCode::invalid_range, "mode band must satisfy 0 < k_lo < k_hi with >= 2 modes");
  }
  if (!(c.alpha > 0.0) || !(c.eps > 0.0) || !(c.time_constant > 0.0) || !(c.rate_noise >= 0.0)) {
    throw Error(ErrorCode::invalid_range, "alpha, eps and time constant must be positive");
  }
  const WavenumberGrid g = WavenumberGrid::make(c.k_lo, c.k_hi, c.n_modes);
  const auto k = g.nodes();
  const auto w = g.weights();
  std::vector<Mode> modes(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double E = c.alpha * std::pow(c.eps, 2.0 / 3.0) * std::pow(k[i], -5.0 / 3.0);
    modes[i].k = k[i];
    modes[i].amplitude = std::sqrt(2.0 * (2.0 / 3.0) * E * w[i]);
    modes[i].tau = c.time_constant * std::pow(c.eps, -1.0 / 3.0) * std::pow(k[i], -2.0 / 3.0);
  }
  const double us = c.sweep_velocity > 0.0 ? c.sweep_velocity : std::sqrt(mode_variance(modes));
  for (auto& m : modes) {
    m.rate = c.model == DecorrelationModel::kolmogorov ? 1.0 / m.tau : m.k * us;
  }
  return modes;
}

double mode_variance(std::span<const Mode> modes) {
  double v = 0.0;
  for (const auto& m : modes) v += 0.5 * m.amplitude * m.amplitude;
  return v;
}

EnsembleConfig resolve(const EnsembleConfig& config) {
  EnsembleConfig c = config;
  const auto modes = build_modes(c);
  const double fast = fastest_rate(c, modes);
  const double slow = slowest_rate(modes);
  const double min_duration = 100.0 * kTwoPi / slow;
  if (c.duration == 0.0) {
    c.duration = min_duration;
  } else if (c.duration < min_duration * (1.0 - 1e-12)) {
    throw Error(ErrorCode::under_resolved,
                "duration " + std::to_string(c.duration) + " is shorter than 100 periods (" +
                    std::to_string(min_duration) + ")");
  }
  if (c.sample_rate == 0.0) {
    c.sample_rate = 2.0 * fast / std::numbers::pi;
  } else if (std::numbers::pi * c.sample_rate < fast) {
    throw Error(ErrorCode::under_resolved, "sample rate misses the fastest mode");
  }
  if (c.n_realizations == 0) throw Error(ErrorCode::invalid_range, "no realizations requested");
  return c;
}

std::pair<double, double> model_band(const EnsembleConfig& config) {
  const auto modes = build_modes(config);
  return {modes.front().rate, modes.back().rate};
}

std::pair<double, double> central_decade(const EnsembleConfig& config) {
  const auto [lo, hi] = model_band(config);
  const double centre = std::sqrt(lo * hi);
  return {centre / std::sqrt(10.0), centre * std::sqrt(10.0)};
}

std::vector<double> synthesize_realization(const EnsembleConfig& c, std::span<const Mode> modes,
                                           std::size_t index) {
  const auto n = static_cast<std::size_t>(std::floor(c.duration * c.sample_rate)) + 1;
  const double dt = 1.0 / c.sample_rate;
  std::vector<double> u(n, 0.0);
  auto gen = realization_engine(c.seed, index);
  NormalStream normal(gen);
  if (c.model == DecorrelationModel::sweeping) {
    const double us = sweep_rms(c, modes);
    const double V = c.random_sweep ? us * normal.next() : us;
    for (const auto& m : modes) {
      const double phase0 = kTwoPi * uniform01(gen);
      const double w = m.k * V;
      for (std::size_t i = 0; i < n; ++i) {
        u[i] += m.amplitude * std::cos(w * (static_cast<double>(i) * dt) + phase0);
      }
    }
    return u;
  }
  for (const auto& m : modes) {
    double phase = kTwoPi * uniform01(gen);
    double x = normal.next();
    const double decay = std::exp(-dt / m.tau);
    const double kick = std::sqrt(1.0 - decay * decay);
    const double base = 1.0 / m.tau;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += m.amplitude * std::cos(phase);
      phase += base * (1.0 + c.rate_noise * x) * dt;
      x = decay * x + kick * normal.next();
    }
  }
  return u;
}

FrequencySpectrum frequency_spectrum(const std::vector<std::vector<double>>& series,
                                     double sample_rate, std::size_t segment_length,
                                     WindowKind window, std::size_t min_realizations,
                                     std::size_t workers) {
  if (series.size() < min_realizations) {
    throw Error(ErrorCode::insufficient_data, std::to_string(series.size()) +
                                                  " realizations, need " +
                                                  std::to_string(min_realizations));
  }
  if (!(sample_rate > 0.0)) throw Error(ErrorCode::invalid_range, "sample rate must be positive");
  const std::size_t L = segment_length;
  if (L < 4) throw Error(ErrorCode::invalid_range, "segment too short");
  for (const auto& s : series) {
    if (s.size() < L) throw Error(ErrorCode::insufficient_data, "series shorter than one segment");
  }
  std::vector<double> w(L, 1.0);
  if (window == WindowKind::hann) {
    for (std::size_t i = 0; i < L; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(L));
    }
  }
  double wsum = 0.0;
  for (double v : w) wsum += v * v;
  const std::size_t bins = L / 2 + 1;
  const std::size_t hop = window == WindowKind::hann ? L / 2 : L;

  FftwPlan plan{L, nullptr};
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    std::vector<double> in(L);
    std::vector<fftw_complex> out(bins);
    plan.plan = fftw_plan_dft_r2c_1d(static_cast<int>(L), in.data(), out.data(), FFTW_ESTIMATE);
  }
  if (!plan.plan) throw Error(ErrorCode::quadrature_failure, "FFT plan creation failed");

  std::vector<std::vector<double>> per(series.size(), std::vector<double>(bins, 0.0));
  std::vector<double> sq(series.size(), 0.0);
  parallel_for(series.size(), workers, [&](std::size_t r) {
    const auto& s = series[r];
    double* in = fftw_alloc_real(L);
    fftw_complex* out = fftw_alloc_complex(bins);
    std::size_t segments = 0;
    double used_sq = 0.0;
    for (std::size_t start = 0; start + L <= s.size(); start += hop) {
      for (std::size_t i = 0; i < L; ++i) {
        in[i] = s[start + i] * w[i];
        used_sq += s[start + i] * s[start + i];
      }
      fftw_execute_dft_r2c(plan.plan, in, out);
      for (std::size_t b = 0; b < bins; ++b) {
        const double p = out[b][0] * out[b][0] + out[b][1] * out[b][1];
        const bool edge = b == 0 || (L % 2 == 0 && b == bins - 1);
        per[r][b] += (edge ? 1.0 : 2.0) * p;
      }
      ++segments;
    }
    fftw_free(in);
    fftw_free(out);
    const double norm = 1.0 / (static_cast<double>(segments) * sample_rate * wsum * kTwoPi);
    for (double& v : per[r]) v *= norm;
    sq[r] = used_sq / static_cast<double>(segments * L);
  });
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan.plan);
  }

  FrequencySpectrum out;
  out.n_realizations = series.size();
  out.segment_length = L;
  out.omega.resize(bins);
  out.phi.assign(bins, 0.0);
  const double d_omega = kTwoPi * sample_rate / static_cast<double>(L);
  for (std::size_t b = 0; b < bins; ++b) out.omega[b] = d_omega * static_cast<double>(b);
  for (std::size_t r = 0; r < series.size(); ++r) {
    for (std::size_t b = 0; b < bins; ++b) out.phi[b] += per[r][b];
    out.variance += sq[r];
  }
  const double inv = 1.0 / static_cast<double>(series.size());
  for (double& v : out.phi) v *= inv;
  out.variance *= inv;
  for (double v : out.phi) out.integral += v * d_omega;
  return out;
}

EnsembleResult run_ensemble(const EnsembleConfig& config) {
  EnsembleResult res;
  res.config = resolve(config);
  res.modes = build_modes(res.config);
  res.target_variance = mode_variance(res.modes);
  const EnsembleConfig& c = res.config;
  std::vector<std::vector<double>> series(c.n_realizations);
  parallel_for(c.n_realizations, c.workers, [&](std::size_t r) {
    series[r] = synthesize_realization(c, res.modes, r);
  });
  // Segment: the largest power of two giving at least eight segments.
  const std::size_t n = series.front().size();
  std::size_t L = 16;
  while (L * 2 <= n / 8) L *= 2;
  double total = 0.0;
  for (const auto& s : series) {
    double acc = 0.0;
    for (double v : s) acc += v * v;
    total += acc / static_cast<double>(s.size());
  }
  res.sample_variance = total / static_cast<double>(series.size());
  res.spectrum = frequency_spectrum(series, c.sample_rate, L, WindowKind::hann,
                                    std::min<std::size_t>(16, c.n_realizations), c.workers);
  return res;
}

SlopeFit slope_fit(const FrequencySpectrum& spectrum, double omega_lo, double omega_hi,
                   std::size_t bins_per_decade) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo)) {
    throw Error(ErrorCode::invalid_range, "window must satisfy 0 < lo < hi");
  }
  if (omega_hi < 10.0 * omega_lo * (1.0 - 1e-9)) {
    throw Error(ErrorCode::invalid_range, "slope window narrower than one decade");
  }
  double support_lo = std::numeric_limits<double>::infinity(), support_hi = 0.0;
  for (std::size_t i = 0; i < spectrum.omega.size(); ++i) {
    if (spectrum.omega[i] > 0.0 && spectrum.phi[i] > 0.0) {
      support_lo = std::min(support_lo, spectrum.omega[i]);
      support_hi = std::max(support_hi, spectrum.omega[i]);
    }
  }
  if (omega_lo < support_lo || omega_hi > support_hi) {
    throw Error(ErrorCode::window_outside_support, "window leaves the spectrum support");
  }
  const double decades = std::log10(omega_hi / omega_lo);
  const auto nb = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(decades * static_cast<double>(bins_per_decade))));
  std::vector<double> sum_phi(nb, 0.0), sum_lw(nb, 0.0);
  std::vector<std::size_t> count(nb, 0);
  const double llo = std::log(omega_lo), span = std::log(omega_hi) - llo;
  for (std::size_t i = 0; i < spectrum.omega.size(); ++i) {
    const double om = spectrum.omega[i];
    if (om < omega_lo || om > omega_hi || !(spectrum.phi[i] > 0.0)) continue;
    auto b = static_cast<std::size_t>((std::log(om) - llo) / span * static_cast<double>(nb));
    b = std::min(b, nb - 1);
    sum_phi[b] += spectrum.phi[i];
    sum_lw[b] += std::log(om);
    ++count[b];
  }
  std::vector<double> x, y;
  for (std::size_t b = 0; b < nb; ++b) {
    if (count[b] == 0) continue;
    x.push_back(sum_lw[b] / static_cast<double>(count[b]));
    y.push_back(std::log(sum_phi[b] / static_cast<double>(count[b])));
  }
  if (x.size() < 3) throw Error(ErrorCode::insufficient_data, "too few populated frequency bins");
  const LineFit f = fit_line(x, y);
  return {f.slope, f.slope_stderr, omega_lo, omega_hi, x.size()};
}

}  // namespace hitlab
