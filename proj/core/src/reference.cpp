#include "hitlab/reference.hpp"

#include <cmath>
#include <string>

#include "hitlab/error.hpp"
#include "hitlab/fitting.hpp"

namespace hitlab {

ChannelFlowCase ChannelFlowCase::from_pressure_gradient(double P, double mu, double h) {
  ChannelFlowCase c{P, mu, h, P * h * h / (3.0 * mu)};
  c.validate();
  return c;
}

ChannelFlowCase ChannelFlowCase::from_bulk_velocity(double U, double mu, double h) {
  ChannelFlowCase c{3.0 * mu * U / (h * h), mu, h, U};
  c.validate();
  return c;
}

void ChannelFlowCase::validate() const {
  if (!(dynamic_viscosity > 0.0) || !(half_height > 0.0)) {
    throw Error(ErrorCode::invalid_range, "viscosity and half height must be positive");
  }
  if (!(pressure_gradient >= 0.0) || !(bulk_velocity >= 0.0)) {
    throw Error(ErrorCode::invalid_range, "pressure gradient and bulk velocity must be non-negative");
  }
  const double U = pressure_gradient * half_height * half_height / (3.0 * dynamic_viscosity);
  if (std::abs(U - bulk_velocity) > 1e-12 * std::max(U, bulk_velocity)) {
    throw Error(ErrorCode::invalid_range, "bulk velocity inconsistent with P h^2 / (3 mu)");
  }
}

namespace {

void check_y(const ChannelFlowCase& c, double y) {
  if (!(std::abs(y) <= c.half_height)) {
    throw Error(ErrorCode::out_of_channel, "y=" + std::to_string(y) + " outside the channel");
  }
}

}  // namespace

double poiseuille_profile(const ChannelFlowCase& c, double y) {
  check_y(c, y);
  const double h = c.half_height;
  return c.pressure_gradient / (2.0 * c.dynamic_viscosity) * (h * h - y * y);
}

double poiseuille_profile_bulk(const ChannelFlowCase& c, double y) {
  check_y(c, y);
  const double h = c.half_height;
  return 3.0 * c.bulk_velocity / (2.0 * h * h) * (h * h - y * y);
}

double poiseuille_dissipation(const ChannelFlowCase& c) {
  return 6.0 * c.dynamic_viscosity * c.bulk_velocity * c.bulk_velocity / c.half_height;
}

double poiseuille_dissipation_quadrature(const ChannelFlowCase& c) {
  // du/dy is linear, so a two-point Gauss rule integrates (du/dy)^2 exactly.
  const double h = c.half_height;
  const double g = 1.0 / std::sqrt(3.0);
  double sum = 0.0;
  for (double xi : {-g, g}) {
    const double y = h * xi;
    const double dudy = -c.pressure_gradient / c.dynamic_viscosity * y;
    sum += c.dynamic_viscosity * dudy * dudy;
  }
  return h * sum;
}

double volumetric_flow(const ChannelFlowCase& c) { return 2.0 * c.half_height * c.bulk_velocity; }

PressureWork pressure_work(const ChannelFlowCase& c, double Q) {
  PressureWork w;
  w.work = Q * c.pressure_gradient;
  const double eps = poiseuille_dissipation(c);
  w.ratio = eps > 0.0 ? w.work / eps : (w.work == 0.0 ? 1.0 : INFINITY);
  const double q0 = volumetric_flow(c);
  w.consistent = std::abs(Q - q0) <= 1e-12 * std::max(std::abs(Q), std::abs(q0));
  return w;
}

std::vector<BatchelorRow> batchelor_limit_table(double eps, std::span<const double> nu_list) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_range, "eps must be positive");
  std::vector<BatchelorRow> rows;
  for (std::size_t i = 0; i < nu_list.size(); ++i) {
    const double nu = nu_list[i];
    if (!(nu > 0.0)) throw Error(ErrorCode::invalid_range, "viscosities must be positive");
    if (i > 0 && !(nu < nu_list[i - 1])) {
      throw Error(ErrorCode::invalid_range, "viscosities must be descending");
    }
    rows.push_back({nu, std::pow(eps / (nu * nu * nu), 0.25)});
  }
  return rows;
}

double batchelor_slope(std::span<const BatchelorRow> rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(std::log(r.nu));
    y.push_back(std::log(r.k_d));
  }
  return fit_line(x, y).slope;
}

}  // namespace hitlab
