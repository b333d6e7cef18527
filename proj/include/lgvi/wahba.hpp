#pragma once

#include <Eigen/Dense>

#include <random>
#include <utility>

#include "lgvi/group.hpp"
#include "lgvi/objective.hpp"

namespace lgvi {

/// Least-squares attitude cost f(R) = 1/2 |A - R|_F^2 with left-trivialized
/// gradient (A^T R - R^T A)^vee and closed-form SVD optimum.
struct WahbaProblem {
  Eigen::Matrix3d A;

  double eval(const Eigen::Matrix3d& R) const;
  Eigen::Vector3d grad(const Eigen::Matrix3d& R) const;
  /// R* = U diag[1, 1, det(UV)] V^T from A = U S V^T; throws
  /// DegenerateProblemError for rank-deficient A.
  std::pair<GroupPoint, double> optimum() const;

  Objective objective() const;
};

/// A with i.i.d. uniform [0,1] entries drawn from rng.
WahbaProblem random_wahba(std::mt19937_64& rng);

/// R0 = Rstar * exp(angle * u) for a uniformly random unit axis u, putting
/// the initial guess at the requested geodesic distance from the optimum.
/// Requires 0 <= angle < pi.
GroupPoint initial_rotation(const GroupPoint& Rstar, double angle,
                            std::mt19937_64& rng);

}  // namespace lgvi
