#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hitlab {

enum class DecorrelationModel { kolmogorov, sweeping };

std::string to_string(DecorrelationModel model);

/// Kinematic single-probe ensemble built from the model spectrum
/// E(k) = alpha eps^(2/3) k^(-5/3) on geometric modes in [k_lo, k_hi].
struct EnsembleConfig {
  DecorrelationModel model = DecorrelationModel::kolmogorov;
  double k_lo = 1.0;
  double k_hi = 1000.0;
  std::size_t n_modes = 48;
  double alpha = 1.5;
  double eps = 1.0;
  /// Constant in tau_m = C eps^(-1/3) k_m^(-2/3).
  double time_constant = 1.0;
  /// Relative rms of the Ornstein-Uhlenbeck phase-rate perturbation.
  double rate_noise = 1.0;
  /// rms of the sweeping velocity; 0 selects the rms velocity of the modes.
  double sweep_velocity = 0.0;
  /// When false every realization is swept at +sweep_velocity (frozen flow).
  bool random_sweep = true;
  std::uint64_t seed = 1;
  std::size_t n_realizations = 64;
  /// Samples per unit time and record length; 0 selects them from the modes
  /// (Nyquist above 4x the fastest rate, 200 periods of the slowest mode).
  double sample_rate = 0.0;
  double duration = 0.0;
  std::size_t workers = 1;
};

struct Mode {
  double k = 0.0;
  double amplitude = 0.0;  // a_m, variance a_m^2 / 2
  double rate = 0.0;       // 1/tau_m (kolmogorov) or k_m U_s (sweeping)
  double tau = 0.0;
};

/// Modes with a_m^2 / 2 = (2/3) E(k_m) dk_m, so the variance sums to U^2.
std::vector<Mode> build_modes(const EnsembleConfig& config);
double mode_variance(std::span<const Mode> modes);

/// Config with sample rate and duration resolved. Throws
/// ErrorCode::under_resolved when an explicit duration is shorter than 100
/// periods of the slowest mode or the sample rate misses the fastest one.
EnsembleConfig resolve(const EnsembleConfig& config);

/// Frequency band [omega_lo, omega_hi] spanned by the modes.
std::pair<double, double> model_band(const EnsembleConfig& config);

/// One realization of u(t) at t = i / sample_rate.
std::vector<double> synthesize_realization(const EnsembleConfig& resolved_config,
                                           std::span<const Mode> modes, std::size_t index);

enum class WindowKind { hann, rectangular };

struct FrequencySpectrum {
  std::vector<double> omega;
  std::vector<double> phi;
  double variance = 0.0;       // mean u^2 of the samples used
  double integral = 0.0;       // sum phi d omega
  std::size_t n_realizations = 0;
  std::size_t segment_length = 0;
};

/// One-sided Welch estimate (50% overlap) averaged over realizations,
/// normalized so that sum phi d omega equals the mean square of the samples
/// (exactly so for a rectangular window with one segment). Throws
/// ErrorCode::insufficient_data below `min_realizations`.
FrequencySpectrum frequency_spectrum(const std::vector<std::vector<double>>& series,
                                     double sample_rate, std::size_t segment_length,
                                     WindowKind window = WindowKind::hann,
                                     std::size_t min_realizations = 16, std::size_t workers = 1);

struct EnsembleResult {
  EnsembleConfig config;
  std::vector<Mode> modes;
  double target_variance = 0.0;  // U^2
  double sample_variance = 0.0;
  FrequencySpectrum spectrum;
};

/// Synthesizes the ensemble and estimates its spectrum.
EnsembleResult run_ensemble(const EnsembleConfig& config);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t n_bins = 0;
};

/// Least-squares slope of ln phi against ln omega inside the window after
/// averaging into `bins_per_decade` logarithmic bins. Throws
/// ErrorCode::window_outside_support if the window leaves the spectrum
/// support and ErrorCode::invalid_range for windows narrower than a decade.
SlopeFit slope_fit(const FrequencySpectrum& spectrum, double omega_lo, double omega_hi,
                   std::size_t bins_per_decade = 10);

/// The central decade of the model band.
std::pair<double, double> central_decade(const EnsembleConfig& config);

}  // namespace hitlab
