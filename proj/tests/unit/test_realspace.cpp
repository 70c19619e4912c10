#include <cmath>
#include <vector>

#include "doctest.h"
#include "hitlab/error.hpp"
#include "hitlab/realspace.hpp"
#include "oracle.hpp"

using namespace hitlab;

namespace {

double j_direct(double x) { return (std::sin(x) - x * std::cos(x)) / (x * x * x); }
double k3_direct(double x) {
  return (3 * std::sin(x) - 3 * x * std::cos(x) - x * x * std::sin(x)) / std::pow(x, 5);
}

double gaussian_shape(double k) { return std::pow(k / 3.0, 4) * std::exp(-2.0 * std::pow(k / 3.0, 2)); }

}  // namespace

TEST_SUITE("realspace") {

TEST_CASE("kernels match the closed forms and their small-argument limits") {
  for (double x : {0.6, 1.0, 3.0, 10.0, 40.0}) {
    CHECK(sphere_kernel(x) == doctest::Approx(j_direct(x)).epsilon(1e-12));
    CHECK(s3_kernel(x) == doctest::Approx(k3_direct(x)).epsilon(1e-9));
    CHECK(s2_kernel(x) == doctest::Approx(1.0 / 3.0 - j_direct(x)).epsilon(1e-12));
  }
  CHECK(sphere_kernel(0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(s3_kernel(0.0) == doctest::Approx(1.0 / 15.0));
  CHECK(s2_kernel(0.0) == 0.0);
  // Continuity across the series / closed-form switch, checked with long double.
  for (double x : {0.199, 0.201, 0.49, 0.51}) {
    const long double X = x;
    const long double jd = (std::sin(X) - X * std::cos(X)) / (X * X * X);
    const long double kd = (3 * std::sin(X) - 3 * X * std::cos(X) - X * X * std::sin(X)) /
                           (X * X * X * X * X);
    CHECK(std::abs(sphere_kernel(x) - double(jd)) < 1e-12);
    CHECK(std::abs(s3_kernel(x) - double(kd)) < 1e-10);
    CHECK(std::abs(s2_kernel(x) - double(1.0L / 3 - jd)) < 1e-12);
  }
  // Small-x behaviour of 1/3 - j is x^2 / 30.
  CHECK(s2_kernel(1e-4) == doctest::Approx(1e-8 / 30.0).epsilon(1e-6));
}

TEST_CASE("S2 matches direct quadrature and its two limits") {
  // Samples are interpolated log-linearly between nodes, so agreement with
  // the continuous integral improves as the square of the node spacing.
  const std::vector<double> r{0.001, 0.05, 0.3, 1.0, 3.0, 500.0};
  auto sampled = [](std::size_t n) {
    auto g = make_shared_grid(0.5, 200.0, n);
    SpectralState s{g, std::vector<double>(g->size()), 0.0, 0.01};
    for (std::size_t i = 0; i < s.size(); ++i) s.E[i] = gaussian_shape(g->node(i));
    return s;
  };
  const auto s = sampled(128);
  const auto fine = sampled(512);
  const auto S2 = s2_from_spectrum(s, r);
  const auto S2f = s2_from_spectrum(fine, r);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double ref = 4.0 * oracle::gauss_log(
                                 [&](double k) {
                                   const double x = k * r[i];
                                   const double ker = x < 1e-3 ? x * x / 30.0 : 1.0 / 3.0 - j_direct(x);
                                   return gaussian_shape(k) * ker;
                                 },
                                 0.5, 200.0, 3000);
    CHECK(S2[i] == doctest::Approx(ref).epsilon(5e-3));
    CHECK(std::abs(S2f[i] - ref) < 0.1 * std::abs(S2[i] - ref) + 1e-14);
  }
  // Small r: eps r^2 / (15 nu). Large r: 2 U^2 = (4/3) E_tot.
  const double eps = dissipation_rate(s);
  CHECK(S2[0] == doctest::Approx(eps * r[0] * r[0] / (15.0 * s.nu)).epsilon(1e-3));
  CHECK(S2.back() == doctest::Approx(4.0 / 3.0 * total_energy(s)).epsilon(2e-3));
}

TEST_CASE("S3 is the radial integral of the divergence term") {
  // (1/6 r^4) d/dr (r^4 S3) = 2 int T j(kr) dk for any T.
  auto g = make_shared_grid(1.0, 100.0, 96);
  std::vector<double> T(g->size());
  for (std::size_t i = 0; i < T.size(); ++i) {
    const double k = g->node(i);
    T[i] = std::sin(std::log(k)) * std::exp(-k / 30.0);
  }
  std::vector<double> r;
  for (int i = 0; i <= 200; ++i) r.push_back(0.02 * std::pow(50.0, i / 200.0));
  const auto S3 = s3_from_transfer(*g, T, r);
  std::vector<double> r4S3(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) r4S3[i] = std::pow(r[i], 4) * S3[i];
  const auto d = derivative(r, r4S3);
  const auto rhs = sphere_transform(*g, T, r);
  for (std::size_t i = 5; i + 5 < r.size(); i += 15) {
    const double lhs = d[i] / (6.0 * std::pow(r[i], 4));
    CHECK(lhs == doctest::Approx(rhs[i]).epsilon(2e-3).scale(1e-3));
  }
}

TEST_CASE("derivative is exact for quadratics on a non-uniform grid") {
  std::vector<double> x{0.0, 0.3, 0.5, 1.1, 1.2, 2.0};
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 - 2.0 * x[i] + 3.0 * x[i] * x[i];
  const auto d = derivative(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(d[i] == doctest::Approx(-2.0 + 6.0 * x[i]).epsilon(1e-12));
}

TEST_CASE("r grid and aliasing mask") {
  auto g = make_shared_grid(1.0, 1000.0, 64);
  const auto r = make_r_grid(*g, 48);
  CHECK(r.front() == doctest::Approx(0.02 / 1000.0));
  CHECK(r.back() == doctest::Approx(20.0).epsilon(1e-12));
  const auto m = resolved_mask(*g, r);
  for (std::size_t i = 0; i < r.size(); ++i)
    CHECK(bool(m[i]) == (r[i] >= 1.0 / 1000.0 * (1 - 1e-12) && r[i] <= 1.0 * (1 + 1e-12)));
}

TEST_CASE("Karman-Howarth balance closes on a decaying state") {
  auto g = make_shared_grid(1.0, 128.0, 64);
  auto s = initial_spectrum(g, {3.0, 1.0, 4}, 0.02);
  EvolveParams p;
  while (s.t < 1.0) s = step(s, p, {}, suggest_dt(s, p));
  const auto b = step(s, p, {}, suggest_dt(s, p));
  const auto r = make_r_grid(*g, 32);
  const auto rep = khe_residual(s, b, p.closure, {}, r);
  CHECK(rep.relative_residual < 0.02);
  CHECK(rep.time_error < 0.1);
  CHECK(rep.max_term > 0.0);
  // A huge interval makes the centred difference meaningless.
  SpectralState late = b;
  while (late.t < s.t + 3.0) late = step(late, p, {}, suggest_dt(late, p));
  CHECK_THROWS_AS(khe_residual(s, late, p.closure, {}, r), Error);
}

TEST_CASE("dimensionless structure functions") {
  auto g = make_shared_grid(1.0, 100.0, 64);
  const auto s = initial_spectrum(g, {3.0, 1.0, 4}, 0.01);
  const auto tr = transfer_spectrum(s, {});
  const auto r = make_r_grid(*g, 16);
  auto sf = structure_functions(s, tr, r);
  const auto d = diagnostics(s);
  dimensionless_structure(sf, d);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(sf.x[i] == doctest::Approx(r[i] / d.integral_scale));
    CHECK(sf.f2[i] == doctest::Approx(sf.S2[i] / (d.rms_velocity * d.rms_velocity)));
    CHECK(sf.f3[i] == doctest::Approx(sf.S3[i] / std::pow(d.rms_velocity, 3)));
  }
}

}
