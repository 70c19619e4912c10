#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hitlab/error.hpp"
#include "hitlab/spectra.hpp"
#include "oracle.hpp"

using namespace hitlab;

TEST_SUITE("spectra") {

TEST_CASE("initial spectrum carries the requested energy and peaks at k_p") {
  auto g = make_shared_grid(1.0, 200.0, 96);
  const auto s = initial_spectrum(g, {4.0, 2.5, 4}, 0.01);
  CHECK(total_energy(s) == doctest::Approx(2.5).epsilon(1e-13));
  std::size_t imax = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.E[i] > s.E[imax]) imax = i;
  CHECK(std::abs(std::log(g->node(imax) / 4.0)) <= g->log_spacing());
  CHECK_THROWS_AS(initial_spectrum(g, {0.5, 1.0, 4}, 0.01), Error);
  CHECK_THROWS_AS(initial_spectrum(g, {4.0, 1.0, 3}, 0.01), Error);
}

TEST_CASE("diagnostics follow the isotropic conventions") {
  auto g = make_shared_grid(0.5, 400.0, 128);
  const double nu = 0.02;
  const auto s = initial_spectrum(g, {3.0, 1.0, 4}, nu);
  const auto d = diagnostics(s);
  // Independent quadrature of the analytic shape (normalised on the same range).
  auto shape = [](double k) {
    const double x = k / 3.0;
    return std::pow(x, 4) * std::exp(-2.0 * x * x);
  };
  const double norm = oracle::gauss(shape, 0.5, 400.0, 4000);
  const double E = 1.0;
  const double eps = 2.0 * nu *
                     oracle::gauss([&](double k) { return k * k * shape(k); }, 0.5, 400.0, 4000) /
                     norm;
  const double L = 0.75 * std::numbers::pi *
                   oracle::gauss([&](double k) { return shape(k) / k; }, 0.5, 400.0, 4000) / norm;
  const double U = std::sqrt(2.0 * E / 3.0);
  CHECK(d.total_energy == doctest::Approx(E).epsilon(1e-12));
  CHECK(d.dissipation == doctest::Approx(eps).epsilon(1e-5));
  CHECK(d.integral_scale == doctest::Approx(L).epsilon(1e-5));
  CHECK(d.rms_velocity == doctest::Approx(U).epsilon(1e-14));
  CHECK(d.reynolds_L == doctest::Approx(U * L / nu).epsilon(1e-5));
  CHECK(d.taylor_reynolds == doctest::Approx(U * U * std::sqrt(15.0 / (nu * eps))).epsilon(1e-5));
  CHECK(d.kolmogorov_wavenumber == doctest::Approx(std::pow(eps / (nu * nu * nu), 0.25)).epsilon(1e-5));
}

TEST_CASE("degenerate and invalid states") {
  auto g = make_shared_grid(1.0, 10.0, 8);
  SpectralState s{g, std::vector<double>(8, 0.0), 0.0, 0.1};
  CHECK_THROWS_AS(diagnostics(s), Error);
  s.E[3] = -1.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s.E[3] = 1.0;
  s.nu = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("spectral density round trip") {
  auto g = make_shared_grid(1.0, 50.0, 40);
  const auto s = initial_spectrum(g, {2.0, 1.0, 2}, 0.1);
  const auto C = spectral_density(s);
  const auto E = energy_from_density(*g, C);
  for (std::size_t i = 0; i < E.size(); ++i) CHECK(E[i] == doctest::Approx(s.E[i]).epsilon(1e-14));
  CHECK(C[5] == doctest::Approx(s.E[5] / (4.0 * std::numbers::pi * g->node(5) * g->node(5))));
}

TEST_CASE("spectrum_at returns node values and interpolates log-linearly") {
  auto g = make_shared_grid(1.0, 64.0, 7);  // powers of two
  SpectralState s{g, {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625}, 0.0, 0.1};
  CHECK(spectrum_at(s, 4.0) == 0.25);
  // E = 1/k on the nodes, so log-linear interpolation is exact.
  CHECK(spectrum_at(s, 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK_THROWS_AS(spectrum_at(s, 65.0), Error);
}

}
