#include "lgvi/bregman.hpp"

#include <cmath>
#include <stdexcept>

namespace lgvi {

void BregmanParams::validate() const {
  if (p <= 0.0) throw std::invalid_argument("BregmanParams: p must be > 0");
  if (C <= 0.0) throw std::invalid_argument("BregmanParams: C must be > 0");
  if (lambda < 1.0) throw std::invalid_argument("BregmanParams: lambda must be >= 1");
}

namespace {

void check_time(double t) {
  if (t <= 0.0) throw std::domain_error("Bregman schedule: t must be > 0");
}

}  // namespace

double phi(const BregmanParams& params, double t) {
  check_time(t);
  return std::pow(t, params.lambda * params.p + 1.0) / params.p;
}

double phi_prime(const BregmanParams& params, double t) {
  check_time(t);
  const double e = params.lambda * params.p + 1.0;
  return (e / params.p) * std::pow(t, e - 1.0);
}

double theta(const BregmanParams& params, double t) {
  check_time(t);
  const double e = (params.lambda + 1.0) * params.p - 1.0;
  return params.C * params.p * std::pow(t, e);
}

double theta_prime(const BregmanParams& params, double t) {
  check_time(t);
  const double e = (params.lambda + 1.0) * params.p - 1.0;
  return params.C * params.p * e * std::pow(t, e - 1.0);
}

VectorFieldValue el_vector_field(const ContinuousState& state,
                                 const BregmanParams& params,
                                 const Objective& objective) {
  check_time(state.t);
  const double t = state.t;
  const Eigen::VectorXd Jxi = params.metric.apply(state.xi);
  const double damping = (params.lambda * params.p + 1.0) / t;
  const double forcing = params.C * params.p * params.p * std::pow(t, params.p - 2.0);
  const Eigen::VectorXd rhs = -damping * Jxi +
                              coad_star(state.g.kind(), state.xi, Jxi) -
                              forcing * objective.grad(state.g);
  VectorFieldValue out;
  out.g_dot = state.xi;
  out.xi_dot = params.metric.solve(rhs);
  return out;
}

double bregman_lagrangian_value(const ContinuousState& state,
                                const BregmanParams& params,
                                const Objective& objective) {
  check_time(state.t);
  const double kinetic = 0.5 * params.metric.apply(state.xi).dot(state.xi);
  return phi(params, state.t) * kinetic -
         theta(params, state.t) * objective.value(state.g);
}

}  // namespace lgvi
