#include <cmath>
#include <vector>

#include "doctest.h"
#include "hitlab/dissipation_law.hpp"
#include "hitlab/error.hpp"

using namespace hitlab;

namespace {

std::vector<SweepRow> synthetic_rows(double cinf, double c, double c2 = 0.0) {
  std::vector<SweepRow> rows;
  std::size_t i = 0;
  for (double R : {20.0, 45.0, 110.0, 300.0, 800.0, 2000.0}) {
    SweepRow r;
    r.index = i++;
    r.R_L = R;
    r.C_eps = cinf + c / R + c2 / (R * R);
    r.stationary = true;
    rows.push_back(r);
  }
  return rows;
}

RunRecord power_law_record(double exponent, double t0, double t1, std::size_t n) {
  RunRecord rec;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 * std::pow(t1 / t0, double(i) / double(n - 1));
    // Shifts the local exponent by -1 / (t + 2), a monotone transient.
    const double bump = std::sqrt(1.0 + 2.0 / t) - 1.0;
    TimeSample s;
    s.t = t;
    s.total_energy = std::pow(t, exponent) * (1.0 + bump);
    rec.series.push_back(s);
  }
  return rec;
}

}  // namespace

TEST_SUITE("dissipation_law") {

TEST_CASE("linear fit recovers exact synthetic constants") {
  const auto rows = synthetic_rows(0.47, 19.0);
  const auto fit = fit_asymptote(rows);
  CHECK(fit.C_eps_inf == doctest::Approx(0.47).epsilon(1e-12));
  CHECK(fit.C == doctest::Approx(19.0).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.n_points == 6);
  CHECK(fit.covariance.size() == 4);
  CHECK(fit.predict(100.0) == doctest::Approx(0.47 + 0.19));
}

TEST_CASE("quadratic fit recovers the 1/R_L^2 term") {
  const auto rows = synthetic_rows(0.5, 15.0, 120.0);
  const auto fit = fit_asymptote(rows, true);
  CHECK(fit.quadratic);
  CHECK(fit.C_eps_inf == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit.C == doctest::Approx(15.0).epsilon(1e-8));
  CHECK(fit.C2 == doctest::Approx(120.0).epsilon(1e-6));
  CHECK(fit.covariance.size() == 9);
}

TEST_CASE("fit preconditions") {
  auto rows = synthetic_rows(0.5, 10.0);
  rows.resize(3);
  CHECK_THROWS_AS(fit_asymptote(rows), Error);
  auto narrow = synthetic_rows(0.5, 10.0);
  for (std::size_t i = 0; i < narrow.size(); ++i) narrow[i].R_L = 100.0 + 10.0 * double(i);
  try {
    fit_asymptote(narrow);
    FAIL("expected insufficient_span");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_span);
  }
}

TEST_CASE("fit residuals and standard errors with noise") {
  auto rows = synthetic_rows(0.5, 12.0);
  const double noise[6] = {0.01, -0.008, 0.004, -0.006, 0.003, 0.002};
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].C_eps += noise[i];
  const auto fit = fit_asymptote(rows);
  double ss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(fit.residuals[i] == doctest::Approx(rows[i].C_eps - fit.predict(rows[i].R_L)).epsilon(1e-12));
    ss += fit.residuals[i] * fit.residuals[i];
  }
  CHECK(fit.r_squared < 1.0);
  CHECK(fit.C_eps_inf_stderr > 0.0);
  CHECK(fit.C_eps_inf_stderr == doctest::Approx(std::sqrt(fit.covariance[0])));
  CHECK(fit.C_stderr == doctest::Approx(std::sqrt(fit.covariance[3])));
}

TEST_CASE("fit curve spans 1/R_L from 0 to 1.05 of the largest value") {
  const auto rows = synthetic_rows(0.47, 19.0);
  const auto fit = fit_asymptote(rows);
  const auto curve = fit_curve(fit, rows);
  REQUIRE(curve.size() == 100);
  CHECK(curve.front().inv_R_L == 0.0);
  CHECK(curve.front().C_eps == doctest::Approx(0.47));
  CHECK(curve.back().inv_R_L == doctest::Approx(1.05 / 20.0));
  CHECK(curve.back().C_eps == doctest::Approx(0.47 + 19.0 * 1.05 / 20.0));
}

TEST_CASE("fiducial time skips the transient of a power-law decay") {
  const auto rec = power_law_record(-1.3, 0.5, 2000.0, 200);
  const double te = fiducial_time(rec);
  // Over [t, 10^0.5 t] the shift varies by 1/(t+2) - 1/(3.16t+2), which
  // drops to about 2-4% of the exponent for t between 10 and 25.
  CHECK(te >= 8.0);
  CHECK(te <= 30.0);
  RunRecord short_rec = power_law_record(-1.3, 0.5, 20.0, 60);
  CHECK_THROWS_AS(fiducial_time(short_rec), Error);
}

TEST_CASE("dimensionless dissipation") {
  auto g = make_shared_grid(1.0, 100.0, 64);
  const auto s = initial_spectrum(g, {3.0, 1.0, 4}, 0.01);
  const auto d = diagnostics(s);
  CHECK(dimensionless_dissipation(s) ==
        doctest::Approx(d.dissipation * d.integral_scale / std::pow(d.rms_velocity, 3)));
}

TEST_CASE("sweep grid and a two-member sweep") {
  SweepConfig c;
  c.n_bins = 32;
  c.evolve.sample_interval = 0.5;
  const auto g = sweep_grid(c, 0.05);
  CHECK(g->k_max() == doctest::Approx(std::max(2.5 * std::pow(1.0 / 1.25e-4, 0.25), 16.0)));
  const std::vector<double> nus{0.08, 0.05};
  const auto rec = run_sweep(c, nus);
  REQUIRE(rec.rows.size() == 2);
  CHECK(rec.rows[0].R_L < rec.rows[1].R_L);
  for (const auto& r : rec.rows) {
    CHECK(r.stationary);
    CHECK(r.C_eps > 0.0);
  }
  const std::vector<double> bad{0.05, 0.08};
  CHECK_THROWS_AS(run_sweep(c, bad), Error);
}

TEST_CASE("decay coefficient needs snapshots") {
  RunRecord rec = power_law_record(-1.3, 0.5, 200.0, 20);
  CHECK_THROWS_AS(decay_dissipation_coefficient(rec), Error);
}

TEST_CASE("reference constants") {
  CHECK(kReferenceCepsInf == 0.468);
  CHECK(kReferenceC == 18.9);
}

}
