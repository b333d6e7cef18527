#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "lgvi/errors.hpp"

namespace lgvi {

/// hat: R^3 -> so(3), hat(v) * w == v x w.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> hat(const Eigen::Matrix<Scalar, 3, 1>& v) {
  Eigen::Matrix<Scalar, 3, 3> S;
  // clang-format off
  S <<       0, -v.z(),  v.y(),
         v.z(),      0, -v.x(),
        -v.y(),  v.x(),      0;
  // clang-format on
  return S;
}

/// vee: so(3) -> R^3, inverse of hat. Rejects inputs whose symmetric part
/// exceeds 1e-10 in Frobenius norm; extraction itself is bit-exact on skew
/// matrices.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> vee(const Eigen::Matrix<Scalar, 3, 3>& S) {
  if ((S + S.transpose()).norm() > Scalar(1e-10)) {
    throw std::invalid_argument("vee: input is not skew-symmetric");
  }
  return Eigen::Matrix<Scalar, 3, 1>(S(2, 1), S(0, 2), S(1, 0));
}

/// Rodrigues formula for exp: so(3) -> SO(3), with series coefficients below
/// |v| = 1e-8 to avoid the 0/0 in sin(t)/t.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> exp_so3(const Eigen::Matrix<Scalar, 3, 1>& v) {
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
  const Scalar theta2 = v.squaredNorm();
  const Scalar theta = std::sqrt(theta2);
  Scalar a, b;  // R = I + a*hat(v) + b*hat(v)^2
  if (theta < Scalar(1e-8)) {
    a = Scalar(1) - theta2 / Scalar(6);
    b = Scalar(0.5) - theta2 / Scalar(24);
  } else {
    a = std::sin(theta) / theta;
    b = (Scalar(1) - std::cos(theta)) / theta2;
  }
  const Mat3 S = hat(v);
  return Mat3(Mat3::Identity() + a * S + b * S * S);
}

/// log: SO(3) -> R^3 with rotation angle in [0, pi]. Throws ConvergenceError
/// when the angle is within 1e-6 of pi (axis sign is ambiguous there).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> log_so3(const Eigen::Matrix<Scalar, 3, 3>& R) {
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  const Scalar pi = Scalar(EIGEN_PI);
  Scalar c = (R.trace() - Scalar(1)) / Scalar(2);
  c = std::min(Scalar(1), std::max(Scalar(-1), c));
  const Scalar theta = std::acos(c);
  if (theta > pi - Scalar(1e-6)) {
    throw ConvergenceError("log_so3: rotation angle within 1e-6 of pi");
  }
  const Vec3 w(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  if (theta < Scalar(1e-8)) {
    // w = 2 sin(theta) u; sin(theta)/theta ~ 1 - theta^2/6
    return Vec3(Scalar(0.5) * (Scalar(1) + theta * theta / Scalar(6)) * w);
  }
  if (theta > Scalar(3)) {
    // Near pi the antisymmetric part is ill-conditioned; recover the axis
    // from R + R^T = 2 cos(theta) I + 2 (1 - cos(theta)) u u^T.
    const Eigen::Matrix<Scalar, 3, 3> B =
        (R + R.transpose() - Scalar(2) * c * Eigen::Matrix<Scalar, 3, 3>::Identity()) /
        (Scalar(2) * (Scalar(1) - c));
    int imax;
    B.diagonal().maxCoeff(&imax);
    Vec3 u = B.col(imax) / std::sqrt(B(imax, imax));
    if (u.dot(w) < Scalar(0)) u = -u;
    return Vec3(theta * u);
  }
  return Vec3((theta / (Scalar(2) * std::sin(theta))) * w);
}

/// Frobenius departure from orthogonality, the drift metric for embedded
/// integrators.
template <typename Scalar>
Scalar orthogonality_error(const Eigen::Matrix<Scalar, 3, 3>& R) {
  return (R.transpose() * R - Eigen::Matrix<Scalar, 3, 3>::Identity()).norm();
}

}  // namespace lgvi
