#include <cmath>
#include <vector>

#include "doctest.h"
#include "hitlab/error.hpp"
#include "hitlab/scaling.hpp"

using namespace hitlab;

namespace {

// E = (eps nu^5)^(1/4) F(k / k_d) on a grid that spans the same k / k_d range
// for every viscosity, so the rescaled tables coincide exactly.
SpectralState universal(double nu, double eps, double lo = 0.01, double hi = 2.0) {
  const double kd = std::pow(eps / (nu * nu * nu), 0.25);
  auto g = make_shared_grid(lo * kd, hi * kd, 64);
  SpectralState s{g, std::vector<double>(64), 0.0, nu};
  const double ev = std::pow(eps * std::pow(nu, 5), 0.25);
  for (std::size_t i = 0; i < 64; ++i) {
    const double x = g->node(i) / kd;
    s.E[i] = ev * 1.6 * std::pow(x, -5.0 / 3.0) * std::exp(-5.2 * x);
  }
  return s;
}

}  // namespace

TEST_SUITE("scaling") {

TEST_CASE("rescale and unscale are inverse") {
  const auto s = universal(1e-3, 1.0);
  const auto t = kolmogorov_rescale(s);
  const double eps = dissipation_rate(s);
  const auto back = kolmogorov_unscale(t, eps, s.nu);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.k_hat[i] == doctest::Approx(s.mesh().node(i)).epsilon(1e-13));
    CHECK(back.E_hat[i] == doctest::Approx(s.E[i]).epsilon(1e-13));
  }
  CHECK_THROWS_AS(kolmogorov_unscale(t, 0.0, 1.0), Error);
}

TEST_CASE("K41 collapses self-similar spectra") {
  std::vector<SpectralState> states{universal(1e-2, 1.0), universal(1e-3, 1.0), universal(1e-4, 1.0)};
  const auto rep = collapse_error(states);
  CHECK(rep.collapse_error < 1e-12);
  CHECK_FALSE(rep.is_void);
  CHECK(rep.pairwise.size() == 3);
  CHECK(rep.window_lo >= 0.05);
}

TEST_CASE("K62 with mu = 0 reproduces K41; mu > 0 with spread scales breaks collapse") {
  std::vector<SpectralState> states{universal(1e-2, 1.0), universal(1e-3, 1.0), universal(1e-4, 1.0)};
  CollapseOptions k41;
  CollapseOptions k62;
  k62.mode = CollapseMode::k62;
  k62.mu = 0.0;
  k62.external_scales = {1.0, 2.0, 8.0};
  const auto a = collapse_error(states, k41);
  const auto b = collapse_error(states, k62);
  CHECK(b.collapse_error == doctest::Approx(a.collapse_error).epsilon(1e-12).scale(1e-12));
  k62.mu = 0.1;
  const auto c = collapse_error(states, k62);
  CHECK(c.collapse_error > 0.1);
  // Table values follow the definition.
  const auto t = k62_rescale(states[1], 0.1, 2.0);
  const auto t41 = kolmogorov_rescale(states[1]);
  CHECK(t.E_hat[10] == doctest::Approx(t41.E_hat[10] * std::pow(states[1].mesh().node(10) * 2.0, 0.1)));
}

TEST_CASE("windows: empty and void") {
  std::vector<SpectralState> apart{universal(1e-3, 1.0, 0.01, 0.1), universal(1e-3, 1.0, 0.2, 2.0)};
  try {
    collapse_error(apart);
    FAIL("expected empty_window");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_window);
  }
  std::vector<SpectralState> narrow{universal(1e-3, 1.0, 0.01, 0.1), universal(1e-3, 1.0, 0.05, 2.0)};
  const auto rep = collapse_error(narrow);
  CHECK(rep.is_void);
}

TEST_CASE("external scales rise with Reynolds number") {
  // Grids start at k = 1 so U^2 is the same for all three and R_lambda
  // grows as nu^(-1/2).
  auto at_unit_k = [](double nu) { return universal(nu, 1.0, std::pow(nu, 0.75)); };
  std::vector<SpectralState> states{at_unit_k(1e-3), at_unit_k(1e-2), at_unit_k(1e-4)};
  const auto L = external_scales_by_reynolds(states, 2.0);
  // R_lambda order is nu = 1e-2 < 1e-3 < 1e-4.
  CHECK(L[1] == doctest::Approx(2.0));
  CHECK(L[0] == doctest::Approx(2.0 * std::sqrt(8.0)));
  CHECK(L[2] == doctest::Approx(16.0));
  CHECK(to_string(CollapseMode::k62) == "k62");
}

}
