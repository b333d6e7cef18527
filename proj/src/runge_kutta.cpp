#include "lgvi/runge_kutta.hpp"

#include <algorithm>
#include <cmath>

#include "lgvi/errors.hpp"
#include "lgvi/so3.hpp"

namespace lgvi {

Eigen::VectorXd rk4_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y,
                         double h) {
  const Eigen::VectorXd k1 = rhs(t, y);
  const Eigen::VectorXd k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
  const Eigen::VectorXd k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
  const Eigen::VectorXd k4 = rhs(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeTrajectory rk45_integrate(const OdeRhs& rhs, double t0,
                             const Eigen::VectorXd& y0, double t_final,
                             const Rk45Options& opts) {
  OdeTrajectory traj;
  traj.t.push_back(t0);
  traj.y.push_back(y0);

  double t = t0;
  Eigen::VectorXd y = y0;
  double h = std::min(opts.h_init, t_final - t0);
  Eigen::VectorXd k1 = rhs(t, y);

  while (t < t_final) {
    h = std::min(h, t_final - t);
    if (h < opts.h_min) {
      throw ConvergenceError("rk45_integrate: step size underflow at t = " +
                             std::to_string(t));
    }
    const Eigen::VectorXd k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Eigen::VectorXd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 =
        rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 =
        rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 = rhs(
        t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::VectorXd y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = rhs(t + h, y5);  // FSAL
    const Eigen::VectorXd err_vec =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc =
          opts.abs_tol + opts.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      err += std::pow(err_vec(i) / sc, 2);
    }
    err = std::sqrt(err / static_cast<double>(y.size()));

    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;
      traj.t.push_back(t);
      traj.y.push_back(y);
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h *= factor;
  }
  return traj;
}

OdeRhs embedded_so3_bregman_rhs(const BregmanParams& params,
                                const Objective& objective) {
  return [params, objective](double t, const Eigen::VectorXd& y) {
    Eigen::Matrix3d R;
    Eigen::Vector3d omega;
    unembed_so3_state(y, R, omega);
    const Eigen::Vector3d Jw = params.metric.rot_block() * omega;
    const Eigen::Vector3d grad =
        objective.grad(GroupPoint::rotation_unchecked(R)).head<3>();
    const double damping = (params.lambda * params.p + 1.0) / t;
    const double forcing =
        params.C * params.p * params.p * std::pow(t, params.p - 2.0);
    const Eigen::Vector3d rhs_vec =
        -damping * Jw - omega.cross(Jw) - forcing * grad;
    const Eigen::Matrix3d Rdot = R * hat(omega);
    Eigen::VectorXd dy(12);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dy(3 * i + j) = Rdot(i, j);
    dy.tail<3>() = params.metric.rot_block().llt().solve(rhs_vec);
    return dy;
  };
}

Eigen::VectorXd embed_so3_state(const Eigen::Matrix3d& R,
                                const Eigen::Vector3d& omega) {
  Eigen::VectorXd y(12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) y(3 * i + j) = R(i, j);
  y.tail<3>() = omega;
  return y;
}

void unembed_so3_state(const Eigen::VectorXd& y, Eigen::Matrix3d& R,
                       Eigen::Vector3d& omega) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R(i, j) = y(3 * i + j);
  omega = y.tail<3>();
}

}  // namespace lgvi
