#include "hitlab/realspace.hpp"

#include <algorithm>
#include <cmath>

#include "hitlab/error.hpp"

namespace hitlab {
namespace {

constexpr double kGauss4x[4] = {-0.86113631159405257522, -0.33998104358485626480,
                                0.33998104358485626480, 0.86113631159405257522};
constexpr double kGauss4w[4] = {0.34785484513745385737, 0.65214515486254614263,
                                0.65214515486254614263, 0.34785484513745385737};

enum class Interp { log_linear, linear };

// int_{k_min}^{k_max} f(k) K(k r) dk with f interpolated inside each cell
// (log-linear for positive spectra, linear in log k otherwise) and the cell
// split so that each piece spans at most ~1 radian of kernel phase.
template <class Kernel>
double radial_integral(const WavenumberGrid& g, std::span<const double> f, double r,
                       Interp interp, Kernel kernel) {
  const auto k = g.nodes();
  const double h = g.log_spacing();
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < k.size(); ++c) {
    const double f0 = f[c], f1 = f[c + 1];
    if (f0 == 0.0 && f1 == 0.0) continue;
    const bool use_log = interp == Interp::log_linear && f0 > 0.0 && f1 > 0.0;
    const double lf0 = use_log ? std::log(f0) : 0.0;
    const double dlf = use_log ? std::log(f1) - lf0 : 0.0;
    const double phase = (k[c + 1] - k[c]) * r;
    const int pieces = 1 + static_cast<int>(std::ceil(phase));
    const double dh = h / pieces;
    double cell = 0.0;
    for (int s = 0; s < pieces; ++s) {
      const double mid = (s + 0.5) * dh;
      for (int q = 0; q < 4; ++q) {
        const double u = mid + 0.5 * dh * kGauss4x[q];  // log(k / k_c)
        const double frac = u / h;
        const double kk = k[c] * std::exp(u);
        const double fv = use_log ? std::exp(lf0 + frac * dlf) : f0 + frac * (f1 - f0);
        cell += kGauss4w[q] * fv * kernel(kk * r) * kk;
      }
    }
    total += 0.5 * dh * cell;
  }
  return total;
}

void check_r(std::span<const double> r) {
  for (double v : r) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::invalid_range, "separations must be positive");
    }
  }
}

std::vector<double> time_rate_terms(const SpectralState& s, const TransferResult& tr,
                                    const ForcingSpec& forcing) {
  // dE/dt per node from the Lin equation.
  const auto F = forcing_spectrum(s, forcing);
  const auto k = s.mesh().nodes();
  std::vector<double> rate(s.size());
  for (std::size_t i = 0; i < rate.size(); ++i) {
    rate[i] = tr.T[i] - 2.0 * s.nu * k[i] * k[i] * s.E[i] + F[i];
  }
  return rate;
}

}  // namespace

double sphere_kernel(double x) {
  const double ax = std::abs(x);
  if (ax < 0.2) {
    const double x2 = x * x;
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
  }
  return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double s2_kernel(double x) {
  const double ax = std::abs(x);
  if (ax < 0.2) {
    const double x2 = x * x;
    return x2 / 30.0 - x2 * x2 / 840.0 + x2 * x2 * x2 / 45360.0 -
           x2 * x2 * x2 * x2 / 3991680.0;
  }
  return 1.0 / 3.0 - sphere_kernel(x);
}

double s3_kernel(double x) {
  const double ax = std::abs(x);
  if (ax < 0.5) {
    const double x2 = x * x;
    return 1.0 / 15.0 - x2 / 210.0 + x2 * x2 / 7560.0 - x2 * x2 * x2 / 498960.0 +
           x2 * x2 * x2 * x2 / 51891840.0;
  }
  const double s = std::sin(x), c = std::cos(x);
  const double x2 = x * x;
  return (3.0 * s - 3.0 * x * c - x2 * s) / (x2 * x2 * x);
}

std::vector<double> make_r_grid(const WavenumberGrid& grid, int per_decade, double lo_factor,
                                double hi_factor) {
  if (per_decade < 1 || !(lo_factor > 0.0) || !(hi_factor > 0.0)) {
    throw Error(ErrorCode::invalid_range, "bad r-grid parameters");
  }
  const double lo = lo_factor / grid.k_max();
  const double hi = hi_factor / grid.k_min();
  if (!(hi > lo)) throw Error(ErrorCode::invalid_range, "empty r range");
  const double decades = std::log10(hi / lo);
  const auto n = static_cast<std::size_t>(std::ceil(decades * per_decade)) + 1;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  r.front() = lo;
  r.back() = hi;
  return r;
}

std::vector<std::uint8_t> resolved_mask(const WavenumberGrid& grid, std::span<const double> r) {
  std::vector<std::uint8_t> m(r.size());
  const double lo = 1.0 / grid.k_max() * (1.0 - 1e-12);
  const double hi = 1.0 / grid.k_min() * (1.0 + 1e-12);
  for (std::size_t i = 0; i < r.size(); ++i) m[i] = r[i] >= lo && r[i] <= hi;
  return m;
}

std::vector<double> s2_from_spectrum(const SpectralState& state, std::span<const double> r) {
  check_r(r);
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out[i] = 4.0 * radial_integral(state.mesh(), state.E, r[i], Interp::log_linear, s2_kernel);
  }
  return out;
}

std::vector<double> s3_from_transfer(const WavenumberGrid& grid, std::span<const double> T,
                                     std::span<const double> r) {
  check_r(r);
  if (T.size() != grid.size()) throw Error(ErrorCode::length_mismatch, "transfer length");
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out[i] = 12.0 * r[i] * radial_integral(grid, T, r[i], Interp::linear, s3_kernel);
  }
  return out;
}

std::vector<double> sphere_transform(const WavenumberGrid& grid, std::span<const double> f,
                                     std::span<const double> r) {
  check_r(r);
  if (f.size() != grid.size()) throw Error(ErrorCode::length_mismatch, "sample length");
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out[i] = 2.0 * radial_integral(grid, f, r[i], Interp::linear, sphere_kernel);
  }
  return out;
}

StructureFunctions structure_functions(const SpectralState& state, const TransferResult& transfer,
                                       std::span<const double> r) {
  StructureFunctions sf;
  sf.r.assign(r.begin(), r.end());
  sf.resolved = resolved_mask(state.mesh(), r);
  sf.S2 = s2_from_spectrum(state, r);
  sf.S3 = s3_from_transfer(state.mesh(), transfer.T, r);
  return sf;
}

void dimensionless_structure(StructureFunctions& sf, const ScalarDiagnostics& reference) {
  if (!(reference.rms_velocity > 0.0) || !(reference.integral_scale > 0.0)) {
    throw Error(ErrorCode::degenerate_spectrum, "reference diagnostics are degenerate");
  }
  const double U = reference.rms_velocity, L = reference.integral_scale;
  const std::size_t n = sf.r.size();
  sf.x.resize(n);
  sf.f2.resize(n);
  sf.f3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sf.x[i] = sf.r[i] / L;
    sf.f2[i] = sf.S2[i] / (U * U);
    sf.f3[i] = sf.S3.empty() ? 0.0 : sf.S3[i] / (U * U * U);
  }
}

std::vector<double> derivative(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(ErrorCode::length_mismatch, "derivative lengths differ");
  if (n < 3) throw Error(ErrorCode::insufficient_data, "derivative needs three points");
  std::vector<double> d(n);
  auto three = [&](std::size_t a, std::size_t b, std::size_t c, double at) {
    // Derivative at `at` of the quadratic through (x_a, x_b, x_c).
    const double xa = x[a], xb = x[b], xc = x[c];
    return y[a] * ((at - xb) + (at - xc)) / ((xa - xb) * (xa - xc)) +
           y[b] * ((at - xa) + (at - xc)) / ((xb - xa) * (xb - xc)) +
           y[c] * ((at - xa) + (at - xb)) / ((xc - xa) * (xc - xb));
  };
  d[0] = three(0, 1, 2, x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = three(i - 1, i, i + 1, x[i]);
  d[n - 1] = three(n - 3, n - 2, n - 1, x[n - 1]);
  return d;
}

KheReport khe_residual(const SpectralState& a, const SpectralState& b,
                       const ClosureParams& closure, const ForcingSpec& forcing,
                       std::span<const double> r) {
  a.validate();
  b.validate();
  check_r(r);
  if (a.grid->hash() != b.grid->hash() || a.nu != b.nu) {
    throw Error(ErrorCode::invalid_range, "states must share grid and viscosity");
  }
  const double dt = b.t - a.t;
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_range, "second state must be later");
  const WavenumberGrid& g = a.mesh();
  const std::size_t n = r.size();

  ClosureParams ca = closure, cb = closure;
  ca.elapsed_time = a.t;
  cb.elapsed_time = b.t;
  const TransferResult ta = transfer_spectrum(a, ca);
  const TransferResult tb = transfer_spectrum(b, cb);

  KheReport rep;
  rep.r.assign(r.begin(), r.end());
  rep.resolved = resolved_mask(g, r);

  const auto s2a = s2_from_spectrum(a, r);
  const auto s2b = s2_from_spectrum(b, r);
  std::vector<double> s2m(n), r4(n);
  for (std::size_t i = 0; i < n; ++i) {
    s2m[i] = 0.5 * (s2a[i] + s2b[i]);
    r4[i] = std::pow(r[i], 4);
  }

  std::vector<double> Tm(g.size());
  for (std::size_t i = 0; i < Tm.size(); ++i) Tm[i] = 0.5 * (ta.T[i] + tb.T[i]);
  const auto s3 = s3_from_transfer(g, Tm, r);

  const auto Fa = forcing_spectrum(a, forcing);
  const auto Fb = forcing_spectrum(b, forcing);
  std::vector<double> Fm(g.size());
  for (std::size_t i = 0; i < Fm.size(); ++i) Fm[i] = 0.5 * (Fa[i] + Fb[i]);
  const auto forcing_part = sphere_transform(g, Fm, r);

  const double dEdt = (total_energy(b) - total_energy(a)) / dt;

  std::vector<double> r4s3(n), r4ds2(n);
  const auto ds2 = derivative(r, s2m);
  for (std::size_t i = 0; i < n; ++i) {
    r4s3[i] = r4[i] * s3[i];
    r4ds2[i] = r4[i] * ds2[i];
  }
  const auto d_r4s3 = derivative(r, r4s3);
  const auto d_r4ds2 = derivative(r, r4ds2);

  // Time-differencing error: half the change of the instantaneous dE/dt
  // transform across the step.
  const auto rate_a = time_rate_terms(a, ta, forcing);
  const auto rate_b = time_rate_terms(b, tb, forcing);
  std::vector<double> rate_diff(g.size());
  for (std::size_t i = 0; i < rate_diff.size(); ++i) rate_diff[i] = rate_b[i] - rate_a[i];
  const auto diff_part = sphere_transform(g, rate_diff, r);

  rep.term_E.resize(n);
  rep.term_dS2dt.resize(n);
  rep.term_S3.resize(n);
  rep.term_visc.resize(n);
  rep.residual.resize(n);
  double max_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.term_E[i] = -(2.0 / 3.0) * dEdt + forcing_part[i];
    rep.term_dS2dt[i] = 0.5 * (s2b[i] - s2a[i]) / dt;
    rep.term_S3[i] = d_r4s3[i] / (6.0 * r4[i]);
    rep.term_visc[i] = -a.nu * d_r4ds2[i] / r4[i];
    rep.residual[i] = rep.term_E[i] + rep.term_dS2dt[i] + rep.term_S3[i] + rep.term_visc[i];
    if (rep.resolved[i]) {
      rep.max_term = std::max({rep.max_term, std::abs(rep.term_E[i]), std::abs(rep.term_dS2dt[i]),
                               std::abs(rep.term_S3[i]), std::abs(rep.term_visc[i])});
      max_err = std::max(max_err, 0.5 * std::abs(diff_part[i]));
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rep.resolved[i]) worst = std::max(worst, std::abs(rep.residual[i]));
  }
  rep.relative_residual = rep.max_term > 0.0 ? worst / rep.max_term : worst;
  rep.time_error = rep.max_term > 0.0 ? max_err / rep.max_term : max_err;
  if (rep.time_error > 0.1) {
    throw Error(ErrorCode::dt_too_large,
                "time-differencing error " + std::to_string(rep.time_error) + " of the largest term");
  }
  return rep;
}

}  // namespace hitlab
