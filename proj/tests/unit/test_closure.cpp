#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hitlab/closure.hpp"
#include "hitlab/error.hpp"
#include "oracle.hpp"

using namespace hitlab;

namespace {

// Direct evaluation of the EDQNM transfer for an analytic spectrum:
// T(k) = iint theta (xy + z^3)/q E(q) [k^2 E(p) - p^2 E(k)] dp dq on the
// truncated triangle region, with mu(k) = lambda sqrt(int_kmin^k s^2 E ds).
struct DirectTransfer {
  double k_min, k_max, nu, lambda;
  std::function<double(double)> E;
  std::vector<double> mu_k, mu_v;

  DirectTransfer(double kmin, double kmax, double nu_, double lam, std::function<double(double)> e)
      : k_min(kmin), k_max(kmax), nu(nu_), lambda(lam), E(std::move(e)) {
    const int n = 4000;
    double acc = 0.0, prev = k_min;
    for (int i = 0; i <= n; ++i) {
      const double k = k_min * std::pow(k_max / k_min, double(i) / n);
      if (i > 0) acc += oracle::gauss([&](double s) { return s * s * E(s); }, prev, k, 1);
      mu_k.push_back(k);
      mu_v.push_back(lambda * std::sqrt(acc));
      prev = k;
    }
  }

  double mu(double k) const {
    auto it = std::lower_bound(mu_k.begin(), mu_k.end(), k);
    if (it == mu_k.begin()) return mu_v.front();
    if (it == mu_k.end()) return mu_v.back();
    const std::size_t i = it - mu_k.begin();
    const double f = (k - mu_k[i - 1]) / (mu_k[i] - mu_k[i - 1]);
    return mu_v[i - 1] + f * (mu_v[i] - mu_v[i - 1]);
  }

  double Q(double k, double p) const {
    const double lo = std::max(std::abs(k - p), k_min), hi = std::min(k + p, k_max);
    if (!(hi > lo)) return 0.0;
    return oracle::gauss(
        [&](double q) {
          const double x = (p * p + q * q - k * k) / (2 * p * q);
          const double y = (k * k + q * q - p * p) / (2 * k * q);
          const double z = (k * k + p * p - q * q) / (2 * k * p);
          const double theta = 1.0 / (mu(k) + mu(p) + mu(q) + nu * (k * k + p * p + q * q));
          return theta * (x * y + z * z * z) / q * E(q);
        },
        lo, hi, 24);
  }

  double T(double k) const {
    std::vector<double> cuts{k_min, k_max, k, k - k_min, k + k_min, k_max - k};
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = std::max(cuts[c], k_min), b = std::min(cuts[c + 1], k_max);
      if (!(b > a)) continue;
      s += oracle::gauss_log(
          [&](double p) { return (k * k * E(p) - p * p * E(k)) * Q(k, p); }, a, b, 30);
    }
    return s;
  }
};

SpectralState test_state(std::size_t n = 64) {
  auto g = make_shared_grid(1.0, 40.0, n);
  SpectralState s{g, std::vector<double>(n), 0.0, 0.01};
  for (std::size_t i = 0; i < n; ++i) {
    const double k = g->node(i);
    s.E[i] = std::pow(k / 4.0, 4) * std::exp(-2.0 * std::pow(k / 4.0, 2));
  }
  return s;
}

}  // namespace

TEST_SUITE("closure") {

TEST_CASE("transfer density is exactly antisymmetric and T integrates to zero") {
  const auto s = test_state();
  ClosureParams p;
  const auto r = transfer_spectrum(s, p);
  for (std::size_t i = 0; i < r.n; ++i)
    for (std::size_t j = 0; j < r.n; ++j) CHECK(r.S(i, j) + r.S(j, i) == 0.0);
  CHECK(std::abs(r.conservation_defect) < 1e-12);
  CHECK(std::abs(s.mesh().integrate(r.T)) < 1e-12 * dissipation_rate(s));
}

TEST_CASE("T decomposes into input minus E times sink rate") {
  const auto s = test_state();
  const auto r = transfer_spectrum(s, {});
  double scale = 0.0;
  for (double t : r.T) scale = std::max(scale, std::abs(t));
  for (std::size_t i = 0; i < r.n; ++i) {
    CHECK(r.sink_rate[i] >= 0.0);
    CHECK(std::abs(r.T[i] - (r.input[i] - s.E[i] * r.sink_rate[i])) < 1e-12 * scale);
  }
}

TEST_CASE("transfer agrees with direct double integration") {
  const auto s = test_state(96);
  const auto r = transfer_spectrum(s, {});
  DirectTransfer direct(1.0, 40.0, 0.01, 0.36, [](double k) {
    return std::pow(k / 4.0, 4) * std::exp(-2.0 * std::pow(k / 4.0, 2));
  });
  double scale = 0.0;
  for (double t : r.T) scale = std::max(scale, std::abs(t));
  for (std::size_t i : {2u, 20u, 35u, 50u, 70u}) {
    const double k = s.mesh().node(i);
    CHECK(std::abs(r.T[i] - direct.T(k)) < 5e-3 * scale);
  }
}

TEST_CASE("equipartition spectrum has no net transfer") {
  auto g = make_shared_grid(1.0, 30.0, 48);
  SpectralState s{g, std::vector<double>(48), 0.0, 0.0};
  for (std::size_t i = 0; i < 48; ++i) s.E[i] = g->node(i) * g->node(i);
  const auto r = transfer_spectrum(s, {});
  for (double t : r.T) CHECK(t == 0.0);
}

TEST_CASE("transfer_density matches the table at nodes and flips sign") {
  const auto s = test_state();
  ClosureParams p;
  const auto r = transfer_spectrum(s, p);
  const auto& g = s.mesh();
  for (auto [i, j] : {std::pair{3u, 10u}, std::pair{20u, 21u}, std::pair{40u, 12u}}) {
    const double d = transfer_density(s, p, g.node(i), g.node(j));
    CHECK(d == doctest::Approx(r.S(i, j)).epsilon(1e-12));
    CHECK(transfer_density(s, p, g.node(j), g.node(i)) == -d);
  }
  CHECK(transfer_density(s, p, 3.3, 3.3) == 0.0);
  const double a = transfer_density(s, p, 2.2, 7.9);
  CHECK(transfer_density(s, p, 7.9, 2.2) == -a);
  CHECK_THROWS_AS(transfer_density(s, p, 0.5, 2.0), Error);
}

TEST_CASE("eddy damping is monotone and starts at zero") {
  const auto s = test_state();
  const auto mu = eddy_damping(s, {});
  CHECK(mu[0] == 0.0);
  for (std::size_t i = 1; i < mu.size(); ++i) CHECK(mu[i] >= mu[i - 1]);
  ClosureParams p;
  p.damping_constant = 0.72;
  const auto mu2 = eddy_damping(s, p);
  CHECK(mu2.back() == doctest::Approx(2.0 * mu.back()));
}

TEST_CASE("triad time") {
  const auto s = test_state();
  ClosureParams p;
  const double th = triad_time(3.0, 4.0, 5.0, s, p);
  CHECK(th > 0.0);
  CHECK_THROWS_AS(triad_time(1.0, 2.0, 5.0, s, p), Error);
  // Finite-time factor tends to the elapsed time for short times and to the
  // asymptotic value for long ones.
  p.markov_time_mode = MarkovTimeMode::finite_time;
  p.elapsed_time = 1e-9;
  CHECK(triad_time(3.0, 4.0, 5.0, s, p) == doctest::Approx(1e-9).epsilon(1e-6));
  p.elapsed_time = 1e6;
  CHECK(triad_time(3.0, 4.0, 5.0, s, p) == doctest::Approx(th).epsilon(1e-12));
}

TEST_CASE("disabled closure and worker-count independence") {
  const auto s = test_state();
  ClosureParams off;
  off.enabled = false;
  for (double t : transfer_spectrum(s, off).T) CHECK(t == 0.0);
  ClosureParams one, many;
  many.workers = 4;
  const auto a = transfer_spectrum(s, one);
  const auto b = transfer_spectrum(s, many);
  CHECK(a.T == b.T);
  CHECK(a.S_density == b.S_density);
}

}
