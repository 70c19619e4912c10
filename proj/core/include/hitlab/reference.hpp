#pragma once

#include <span>
#include <vector>

namespace hitlab {

/// Plane Poiseuille flow between plates at y = +-h. P is the magnitude of the
/// pressure gradient and mu the dynamic viscosity; all values per unit width.
struct ChannelFlowCase {
  double pressure_gradient = 0.0;
  double dynamic_viscosity = 1.0;
  double half_height = 1.0;
  double bulk_velocity = 0.0;

  /// Case with U = P h^2 / (3 mu).
  static ChannelFlowCase from_pressure_gradient(double P, double mu, double h);
  /// Case with P = 3 mu U / h^2.
  static ChannelFlowCase from_bulk_velocity(double U, double mu, double h);

  /// Throws ErrorCode::invalid_range unless mu, h > 0, P, U >= 0 and
  /// U = P h^2 / (3 mu) to 1e-12 relative.
  void validate() const;
};

/// u(y) = (P / 2 mu)(h^2 - y^2). Throws ErrorCode::out_of_channel for |y| > h.
double poiseuille_profile(const ChannelFlowCase& c, double y);
/// The same profile in bulk-velocity form (3U / 2h^2)(h^2 - y^2).
double poiseuille_profile_bulk(const ChannelFlowCase& c, double y);

/// eps = 6 mu U^2 / h.
double poiseuille_dissipation(const ChannelFlowCase& c);

/// int_{-h}^{h} mu (du/dy)^2 dy by Gauss-Legendre quadrature of the profile
/// derivative (exact for the quadratic integrand).
double poiseuille_dissipation_quadrature(const ChannelFlowCase& c);

/// Q = 2 h U per unit width.
double volumetric_flow(const ChannelFlowCase& c);

struct PressureWork {
  double work = 0.0;     // Q P
  double ratio = 0.0;    // Q P / eps (1 for a consistent Q)
  bool consistent = true;
};

PressureWork pressure_work(const ChannelFlowCase& c, double Q);

struct BatchelorRow {
  double nu = 0.0;
  double k_d = 0.0;
};

/// k_d = (eps / nu^3)^(1/4) for each viscosity (positive, descending).
std::vector<BatchelorRow> batchelor_limit_table(double eps, std::span<const double> nu_list);

/// Least-squares slope of ln k_d against ln nu.
double batchelor_slope(std::span<const BatchelorRow> rows);

}  // namespace hitlab
