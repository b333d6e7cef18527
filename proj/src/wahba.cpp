#include "lgvi/wahba.hpp"

#include <cmath>
#include <stdexcept>

#include "lgvi/errors.hpp"

namespace lgvi {

double WahbaProblem::eval(const Eigen::Matrix3d& R) const {
  return 0.5 * (A.squaredNorm() + 3.0) - (A.transpose() * R).trace();
}

Eigen::Vector3d WahbaProblem::grad(const Eigen::Matrix3d& R) const {
  const Eigen::Matrix3d S = A.transpose() * R - R.transpose() * A;
  return Eigen::Vector3d(S(2, 1), S(0, 2), S(1, 0));
}

std::pair<GroupPoint, double> WahbaProblem::optimum() const {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 1e-10 * svd.singularValues().maxCoeff()) {
    throw DegenerateProblemError("WahbaProblem: A is rank-deficient");
  }
  const Eigen::Matrix3d U = svd.matrixU();
  const Eigen::Matrix3d V = svd.matrixV();
  const double d = (U * V.transpose()).determinant();
  const Eigen::Matrix3d Rstar =
      U * Eigen::Vector3d(1.0, 1.0, d).asDiagonal() * V.transpose();
  return {GroupPoint::rotation(Rstar), eval(Rstar)};
}

Objective WahbaProblem::objective() const {
  const Eigen::Matrix3d A_copy = A;
  Objective obj;
  obj.value = [A_copy](const GroupPoint& g) {
    return WahbaProblem{A_copy}.eval(g.rot());
  };
  obj.grad = [A_copy](const GroupPoint& g) {
    return Eigen::VectorXd(WahbaProblem{A_copy}.grad(g.rot()));
  };
  return obj;
}

WahbaProblem random_wahba(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = unif(rng);
  return WahbaProblem{A};
}

GroupPoint initial_rotation(const GroupPoint& Rstar, double angle,
                            std::mt19937_64& rng) {
  if (angle < 0.0 || angle >= static_cast<double>(EIGEN_PI)) {
    throw std::domain_error("initial_rotation: angle must lie in [0, pi)");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d axis;
  do {
    axis = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
  } while (axis.norm() < 1e-12);
  axis.normalize();
  return compose(Rstar, GroupPoint::rotation(exp_so3<double>(
                            Eigen::Vector3d(angle * axis))));
}

}  // namespace lgvi
