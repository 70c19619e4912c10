#include <cmath>
#include <vector>

#include "doctest.h"
#include "hitlab/error.hpp"
#include "hitlab/reference.hpp"
#include "oracle.hpp"

using namespace hitlab;

TEST_SUITE("reference") {

TEST_CASE("Poiseuille profile: both forms, endpoints and centreline") {
  const auto c = ChannelFlowCase::from_bulk_velocity(2.0, 0.5, 1.5);
  CHECK(c.pressure_gradient == doctest::Approx(3.0 * 0.5 * 2.0 / 2.25));
  CHECK(poiseuille_profile(c, 1.5) == 0.0);
  CHECK(poiseuille_profile(c, -1.5) == 0.0);
  CHECK(poiseuille_profile(c, 0.0) == doctest::Approx(1.5 * 2.0).epsilon(1e-14));
  for (double y : {-1.2, -0.3, 0.0, 0.7, 1.4})
    CHECK(poiseuille_profile(c, y) == doctest::Approx(poiseuille_profile_bulk(c, y)).epsilon(1e-14));
  CHECK_THROWS_AS(poiseuille_profile(c, 1.6), Error);
  // Mean of the profile is the bulk velocity.
  const double mean = oracle::gauss([&](double y) { return poiseuille_profile(c, y); }, -1.5, 1.5, 4) / 3.0;
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("dissipation equals pressure work") {
  for (auto [U, mu, h] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{0.3, 2e-3, 0.05}, std::tuple{7.0, 0.9, 3.0}}) {
    const auto c = ChannelFlowCase::from_bulk_velocity(U, mu, h);
    const double eps = poiseuille_dissipation(c);
    CHECK(eps == doctest::Approx(6.0 * mu * U * U / h).epsilon(1e-14));
    CHECK(poiseuille_dissipation_quadrature(c) == doctest::Approx(eps).epsilon(1e-12));
    const double Q = volumetric_flow(c);
    CHECK(Q == doctest::Approx(2.0 * h * U));
    const auto w = pressure_work(c, Q);
    CHECK(w.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.consistent);
    CHECK_FALSE(pressure_work(c, 1.1 * Q).consistent);
  }
  const auto p = ChannelFlowCase::from_pressure_gradient(3.0, 1.0, 1.0);
  CHECK(p.bulk_velocity == doctest::Approx(1.0));
  ChannelFlowCase broken{3.0, 1.0, 1.0, 2.0};
  CHECK_THROWS_AS(broken.validate(), Error);
}

TEST_CASE("Kolmogorov wavenumber scales as nu^(-3/4)") {
  const std::vector<double> nus{1e-1, 1e-2, 1e-3, 1e-4};
  const auto rows = batchelor_limit_table(2.0, nus);
  for (const auto& r : rows) CHECK(r.k_d == doctest::Approx(std::pow(2.0 / std::pow(r.nu, 3), 0.25)));
  CHECK(batchelor_slope(rows) == doctest::Approx(-0.75).epsilon(1e-12));
  const std::vector<double> rising{1e-3, 1e-2};
  CHECK_THROWS_AS(batchelor_limit_table(1.0, rising), Error);
}

}
