#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "lgvi/bregman.hpp"

namespace lgvi {

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Classical fixed-step RK4.
Eigen::VectorXd rk4_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y,
                         double h);

struct Rk45Options {
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double h_init = 1e-3;
  double h_min = 1e-14;
};

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> y;
};

/// Dormand-Prince 5(4) embedded pair with proportional step control.
/// Throws ConvergenceError on step underflow.
OdeTrajectory rk45_integrate(const OdeRhs& rhs, double t0,
                             const Eigen::VectorXd& y0, double t_final,
                             const Rk45Options& opts = Rk45Options());

/// Embedded-coordinate form of the SO(3) Euler-Lagrange flow: y stacks R
/// (row-major, 9 reals) and Omega (3 reals); Rdot = R hat(Omega). No
/// orthogonality enforcement.
OdeRhs embedded_so3_bregman_rhs(const BregmanParams& params,
                                const Objective& objective);

Eigen::VectorXd embed_so3_state(const Eigen::Matrix3d& R,
                                const Eigen::Vector3d& omega);
void unembed_so3_state(const Eigen::VectorXd& y, Eigen::Matrix3d& R,
                       Eigen::Vector3d& omega);

}  // namespace lgvi
