#pragma once

#include <Eigen/Dense>

#include "lgvi/group.hpp"
#include "lgvi/objective.hpp"

namespace lgvi {

/// Parameters of the time-dependent Lagrangian
///   L(t, g, xi) = t^(lambda p + 1)/(2p) <J xi, xi> - C p t^((lambda+1)p - 1) f(g),
/// whose flow converges to the minimizer at rate O(t^-p) for geodesically
/// convex f.
struct BregmanParams {
  double p = 2.0;
  double C = 1.0;
  double lambda = 1.0;
  MetricOperator metric = MetricOperator::identity(GroupKind::SO3);

  void validate() const;
};

/// Schedule weights phi(t) = t^(lambda p + 1)/p and
/// theta(t) = C p t^((lambda+1)p - 1), with analytic derivatives.
/// All four throw std::domain_error for t <= 0 (the schedule is singular at 0).
double phi(const BregmanParams& params, double t);
double phi_prime(const BregmanParams& params, double t);
double theta(const BregmanParams& params, double t);
double theta_prime(const BregmanParams& params, double t);

struct ContinuousState {
  double t;
  GroupPoint g;
  Eigen::VectorXd xi;  // left-trivialized velocity
};

struct VectorFieldValue {
  Eigen::VectorXd g_dot;   // algebra coordinates of g^-1 gdot, equals xi
  Eigen::VectorXd xi_dot;
};

/// Left-trivialized Euler-Lagrange vector field:
///   J xi_dot = -((lambda p + 1)/t) J xi + ad*_xi(J xi) - C p^2 t^(p-2) grad f(g).
VectorFieldValue el_vector_field(const ContinuousState& state,
                                 const BregmanParams& params,
                                 const Objective& objective);

double bregman_lagrangian_value(const ContinuousState& state,
                                const BregmanParams& params,
                                const Objective& objective);

}  // namespace lgvi
