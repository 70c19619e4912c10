#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "hitlab/error.hpp"
#include "hitlab/temporal.hpp"

using namespace hitlab;

TEST_SUITE("temporal") {

TEST_CASE("mode variance equals (2/3) of the band energy") {
  EnsembleConfig c;
  c.k_lo = 1.0;
  c.k_hi = 1000.0;
  c.n_modes = 96;
  const auto modes = build_modes(c);
  const double band = c.alpha * 1.5 * (std::pow(c.k_lo, -2.0 / 3.0) - std::pow(c.k_hi, -2.0 / 3.0));
  CHECK(mode_variance(modes) == doctest::Approx(2.0 / 3.0 * band).epsilon(1e-4));
  for (const auto& m : modes) {
    CHECK(m.tau == doctest::Approx(std::pow(m.k, -2.0 / 3.0)));
    CHECK(m.rate == doctest::Approx(1.0 / m.tau));
  }
  c.model = DecorrelationModel::sweeping;
  c.sweep_velocity = 2.0;
  for (const auto& m : build_modes(c)) CHECK(m.rate == doctest::Approx(2.0 * m.k));
  CHECK_THROWS_AS(build_modes(EnsembleConfig{.k_lo = 2.0, .k_hi = 1.0}), Error);
}

TEST_CASE("resolve fills defaults and rejects under-resolved settings") {
  EnsembleConfig c;
  c.k_hi = 100.0;
  c.n_modes = 16;
  const auto r = resolve(c);
  const auto [lo, hi] = model_band(c);
  CHECK(r.duration == doctest::Approx(100.0 * 2.0 * std::numbers::pi / lo));
  CHECK(std::numbers::pi * r.sample_rate >= hi * (1.0 + 3.0 * c.rate_noise) * (1 - 1e-12));
  EnsembleConfig shortc = c;
  shortc.duration = 0.5 * r.duration;
  CHECK_THROWS_AS(resolve(shortc), Error);
  EnsembleConfig slow = c;
  slow.sample_rate = 0.5 * hi / std::numbers::pi;
  try {
    resolve(slow);
    FAIL("expected under_resolved");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::under_resolved);
  }
}

TEST_CASE("central decade sits at the geometric centre of the band") {
  EnsembleConfig c;
  const auto [lo, hi] = model_band(c);
  const auto [a, b] = central_decade(c);
  CHECK(b / a == doctest::Approx(10.0));
  CHECK(std::sqrt(a * b) == doctest::Approx(std::sqrt(lo * hi)));
}

TEST_CASE("realizations are reproducible per index") {
  EnsembleConfig c;
  c.k_hi = 50.0;
  c.n_modes = 8;
  c = resolve(c);
  const auto modes = build_modes(c);
  const auto a = synthesize_realization(c, modes, 3);
  const auto b = synthesize_realization(c, modes, 3);
  const auto d = synthesize_realization(c, modes, 4);
  CHECK(a == b);
  CHECK(a != d);
  c.seed = 2;
  CHECK(synthesize_realization(c, modes, 3) != a);
}

TEST_CASE("rectangular single-segment estimate obeys Parseval exactly") {
  std::mt19937_64 g(7);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::vector<double>> series(2, std::vector<double>(256));
  for (auto& s : series)
    for (double& v : s) v = n(g);
  const auto fs = frequency_spectrum(series, 10.0, 256, WindowKind::rectangular, 2);
  double ms = 0.0;
  for (const auto& s : series)
    for (double v : s) ms += v * v / 512.0;
  CHECK(fs.integral == doctest::Approx(ms).epsilon(1e-12));
  CHECK(fs.variance == doctest::Approx(ms).epsilon(1e-12));
}

TEST_CASE("white noise gives a flat spectrum at sigma^2 / (pi fs)") {
  std::mt19937_64 g(11);
  std::normal_distribution<double> n(0.0, 2.0);
  std::vector<std::vector<double>> series(32, std::vector<double>(4096));
  for (auto& s : series)
    for (double& v : s) v = n(g);
  const double fs_rate = 5.0;
  const auto sp = frequency_spectrum(series, fs_rate, 256, WindowKind::hann);
  double mean = 0.0;
  std::size_t cnt = 0;
  for (std::size_t b = 5; b + 5 < sp.phi.size(); ++b) {
    mean += sp.phi[b];
    ++cnt;
  }
  mean /= double(cnt);
  CHECK(mean == doctest::Approx(4.0 / (std::numbers::pi * fs_rate)).epsilon(0.03));
  CHECK(sp.integral == doctest::Approx(4.0).epsilon(0.03));
  CHECK_THROWS_AS(frequency_spectrum(series, fs_rate, 256, WindowKind::hann, 64), Error);
}

TEST_CASE("slope fit recovers an exact power law") {
  FrequencySpectrum s;
  for (int i = 1; i <= 5000; ++i) {
    s.omega.push_back(0.01 * i);
    s.phi.push_back(3.0 * std::pow(0.01 * i, -5.0 / 3.0));
  }
  const auto f = slope_fit(s, 0.5, 20.0);
  // Bin averages of discrete samples leave a bias of order 1e-5.
  CHECK(f.slope == doctest::Approx(-5.0 / 3.0).epsilon(1e-4));
  CHECK(f.n_bins >= 10);
  CHECK_THROWS_AS(slope_fit(s, 1.0, 5.0), Error);
  CHECK_THROWS_AS(slope_fit(s, 1e-3, 1.0), Error);
}

TEST_CASE("ensemble output does not depend on the worker count") {
  EnsembleConfig c;
  c.k_hi = 30.0;
  c.n_modes = 12;
  c.n_realizations = 16;
  const auto a = run_ensemble(c);
  c.workers = 3;
  const auto b = run_ensemble(c);
  CHECK(a.spectrum.phi == b.spectrum.phi);
  CHECK(a.spectrum.integral / a.target_variance == doctest::Approx(1.0).epsilon(0.1));
}

}
