#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hitlab/closure.hpp"
#include "hitlab/evolve.hpp"

namespace hitlab {

/// Kernels of the isotropic transforms. j(x) = (sin x - x cos x) / x^3 tends
/// to 1/3 at the origin; s3_kernel(x) = (3 sin x - 3x cos x - x^2 sin x)/x^5
/// tends to 1/15.
double sphere_kernel(double x);
double s2_kernel(double x);  // 1/3 - j(x), accurate near x = 0
double s3_kernel(double x);

/// Geometric r grid with `per_decade` nodes per decade covering
/// [lo_factor / k_max, hi_factor / k_min].
std::vector<double> make_r_grid(const WavenumberGrid& grid, int per_decade = 48,
                                double lo_factor = 0.02, double hi_factor = 20.0);

/// 1 where 1/k_max <= r <= 1/k_min, else 0 (aliasing flag).
std::vector<std::uint8_t> resolved_mask(const WavenumberGrid& grid, std::span<const double> r);

/// S2(r) = 4 int E(k) [1/3 - j(kr)] dk.
std::vector<double> s2_from_spectrum(const SpectralState& state, std::span<const double> r);

/// S3(r) = 12 r int T(k) s3_kernel(kr) dk, the radial integral of the
/// divergence term: (1/6r^4) d/dr(r^4 S3) = 2 int T j(kr) dk.
std::vector<double> s3_from_transfer(const WavenumberGrid& grid, std::span<const double> T,
                                     std::span<const double> r);

/// 2 int f(k) j(kr) dk for an arbitrary per-node f (used for the forcing
/// and the time-derivative terms).
std::vector<double> sphere_transform(const WavenumberGrid& grid, std::span<const double> f,
                                     std::span<const double> r);

struct StructureFunctions {
  std::vector<double> r;
  std::vector<std::uint8_t> resolved;
  std::vector<double> S2;
  std::vector<double> S3;
  /// Filled by dimensionless_structure().
  std::vector<double> x;
  std::vector<double> f2;
  std::vector<double> f3;
};

StructureFunctions structure_functions(const SpectralState& state, const TransferResult& transfer,
                                       std::span<const double> r);

/// S_n / U_ref^n on x = r / L_ref. Passing the diagnostics of the same state
/// gives f_n(x); passing those of a fiducial time gives g_n(x, t~).
void dimensionless_structure(StructureFunctions& sf, const ScalarDiagnostics& reference);

struct KheReport {
  std::vector<double> r;
  std::vector<std::uint8_t> resolved;
  std::vector<double> term_E;       // -(2/3) dE_tot/dt + 2 int F j(kr) dk
  std::vector<double> term_dS2dt;   // (1/2) dS2/dt
  std::vector<double> term_S3;      // (1/6 r^4) d/dr (r^4 S3)
  std::vector<double> term_visc;    // -(nu/r^4) d/dr (r^4 dS2/dr)
  std::vector<double> residual;
  double max_term = 0.0;
  /// max |residual| / max_term over the resolved nodes.
  double relative_residual = 0.0;
  /// Estimated time-differencing error relative to max_term.
  double time_error = 0.0;
};

/// Four-term Karman-Howarth balance between two consecutive states a and b
/// (b.t > a.t), with every term centred on the midpoint. The forcing, when
/// present, enters through term_E. Throws ErrorCode::dt_too_large when the
/// time-differencing error estimate exceeds 10% of the largest term.
KheReport khe_residual(const SpectralState& a, const SpectralState& b,
                       const ClosureParams& closure, const ForcingSpec& forcing,
                       std::span<const double> r);

/// First derivative on a non-uniform grid, second order (one-sided at ends).
std::vector<double> derivative(std::span<const double> x, std::span<const double> y);

}  // namespace hitlab
