#include <cmath>
#include <vector>

#include "doctest.h"
#include "hitlab/error.hpp"
#include "hitlab/rg.hpp"
#include "oracle.hpp"

using namespace hitlab;

namespace {

// With the default kernel and alpha = 2 / (3 nu~) the recursion
// nu~' = h^(4/3) (nu~ + A (h^(-8/3) - 1) / (4 nu~^2)) has the fixed point
// nu~*^3 = (A / 4) (h^(-4/3) + 1).
double analytic_fixed_point(double h, double A = 1.0 / 9.0) {
  return std::cbrt(A / 4.0 * (std::pow(h, -4.0 / 3.0) + 1.0));
}

}  // namespace

TEST_SUITE("rg") {

TEST_CASE("increment matches the closed-form band integral") {
  const ModelSpectrum m{1.5, 2.0};
  const double lo = 0.7, hi = 1.0, nu = 0.3;
  const double exact = (1.0 / 9.0) * 1.5 * std::pow(2.0, 2.0 / 3.0) / nu * 0.375 *
                       (std::pow(lo, -8.0 / 3.0) - std::pow(hi, -8.0 / 3.0));
  CHECK(eddy_viscosity_increment(lo, hi, nu, m) == doctest::Approx(exact).epsilon(1e-12));
  const double weighted = oracle::gauss(
      [&](double j) { return (1.0 / 9.0) * m(j) / (nu * j * j) * (j / hi) * (j / hi); }, lo, hi, 50);
  CHECK(eddy_viscosity_increment(lo, hi, nu, m, 1.0 / 9.0, 2.0) == doctest::Approx(weighted).epsilon(1e-12));
  CHECK(eddy_viscosity_increment(hi, hi, nu, m) == 0.0);
}

TEST_CASE("fixed point matches the analytic value for several band ratios") {
  for (double h : {0.6, 0.7, 0.8}) {
    RgConfig c;
    c.h = h;
    const auto r = iterate_to_fixed_point(c);
    CHECK(r.nu_tilde_star == doctest::Approx(analytic_fixed_point(h)).epsilon(1e-7));
    CHECK(r.alpha == doctest::Approx(2.0 / (3.0 * r.nu_tilde_star)));
    CHECK(r.tail_slope == doctest::Approx(-4.0 / 3.0).epsilon(1e-6));
    CHECK(r.state.history.size() == r.iterations + c.settle_iterations + 1);
  }
}

TEST_CASE("fixed point does not depend on the starting viscosity") {
  RgConfig a, b;
  a.nu0 = 0.1;
  b.nu0 = 10.0;
  const auto ra = iterate_to_fixed_point(a);
  const auto rb = iterate_to_fixed_point(b);
  CHECK(std::abs(ra.nu_tilde_star - rb.nu_tilde_star) <= 1e-7 * rb.nu_tilde_star);
}

TEST_CASE("recursion bookkeeping") {
  RgConfig c;
  auto s = initial_rg_state(c);
  CHECK(s.history.size() == 1);
  const auto n = eliminate_band(s, c);
  CHECK(n.k_n == doctest::Approx(c.h * c.k0));
  CHECK(n.nu_n == doctest::Approx(c.nu0 + n.history.back().delta_nu));
  CHECK(n.history.back().nu_tilde ==
        doctest::Approx(n.nu_n * std::pow(n.k_n, 4.0 / 3.0)));
  RgConfig bad;
  bad.kernel = [](double, double, double, const ModelSpectrum&) { return -1.0; };
  try {
    eliminate_band(initial_rg_state(bad), bad);
    FAIL("expected kernel_divergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kernel_divergence);
  }
  RgConfig wide;
  wide.h = 0.3;  // outside the contracting range h > 3^(-3/4)
  wide.max_iterations = 200;
  CHECK_THROWS_AS(iterate_to_fixed_point(wide), Error);
  CHECK_THROWS_AS((RgConfig{.h = 1.0}.validate()), Error);
}

TEST_CASE("model spectrum dissipates eps and its effective cutoff") {
  const double alpha = 1.6, eps = 1.0, nu = 1e-3;
  const double kd = std::pow(eps / (nu * nu * nu), 0.25);
  auto g = make_shared_grid(1e-4 * kd, 10.0 * kd, 512);
  const auto s = model_dissipation_spectrum(g, alpha, eps, nu);
  CHECK(dissipation_rate(s) == doctest::Approx(eps).epsilon(1e-3));
  // Independent root of int_0^x0 x^(1/3) exp(-beta x^2) = 0.999 of the total.
  const double beta = std::pow(alpha * std::tgamma(2.0 / 3.0), 1.5);
  auto f = [&](double x) { return std::cbrt(x) * std::exp(-beta * x * x); };
  const double total = oracle::gauss(f, 0.0, 10.0, 4000);
  double a = 0.1, b = 5.0;
  for (int it = 0; it < 60; ++it) {
    const double m = 0.5 * (a + b);
    (oracle::gauss(f, 0.0, m, 2000) < 0.999 * total ? a : b) = m;
  }
  const double k0 = effective_cutoff(s, 0.999);
  CHECK(k0 / kd >= a * (1 - 1e-9));
  CHECK(k0 / kd <= a * g->ratio() * (1 + 1e-9));
  CHECK(effective_cutoff(s, 1.0) == g->k_max());
  CHECK_THROWS_AS(effective_cutoff(s, 1.5), Error);
}

TEST_CASE("local Reynolds number") {
  auto g = make_shared_grid(1.0, 100.0, 32);
  SpectralState s{g, std::vector<double>(32, 4.0), 0.0, 0.5};
  CHECK(local_reynolds(s, 9.0) == doctest::Approx(2.0 / (0.5 * 3.0)));
}

TEST_CASE("sweep over h keeps input order and ignores the worker count") {
  RgConfig c;
  const std::vector<double> hs{0.8, 0.6, 0.7};
  const auto a = rg_sweep(c, hs, 1);
  const auto b = rg_sweep(c, hs, 3);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].h == hs[i]);
    CHECK(a[i].nu_tilde_star == b[i].nu_tilde_star);
    CHECK(a[i].nu_tilde_star == doctest::Approx(analytic_fixed_point(hs[i])).epsilon(1e-7));
  }
}

}
