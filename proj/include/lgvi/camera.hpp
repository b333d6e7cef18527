#pragma once

#include <Eigen/Dense>

#include <optional>
#include <random>
#include <vector>

#include "lgvi/group.hpp"
#include "lgvi/objective.hpp"

namespace lgvi {

struct Pose {
  Eigen::Matrix3d R;
  Eigen::Vector3d x;

  GroupPoint as_group_point() const { return GroupPoint::product(R, x); }
  static Pose from_group_point(const GroupPoint& g) {
    return Pose{g.rot(), Eigen::Vector3d(g.vec())};
  }
};

struct Feature {
  Eigen::Vector2d pixel;
  Eigen::Vector3d world;
};

struct CameraScene {
  Eigen::Matrix3d K;
  std::vector<Feature> features;
  std::optional<Pose> ground_truth;

  void validate_for_solve() const;  // K invertible, >= 6 features
};

/// Perspective projection K (R P + x) followed by dehomogenization; throws
/// BehindCameraError for non-positive depth.
Eigen::Vector2d project(const Pose& pose, const Eigen::Matrix3d& K,
                        const Eigen::Vector3d& world_point,
                        int feature_index = -1);

enum class GradientMethod { FiniteDifference, Analytic };

/// Sum of squared pixel reprojection errors over the scene.
double reprojection_eval(const Pose& pose, const CameraScene& scene);
/// Left-trivialized gradient on so(3) (+) R^3. The finite-difference path is
/// central differencing with step 1e-6 along the six basis directions; the
/// analytic path chains through the projection.
Eigen::VectorXd reprojection_grad(
    const Pose& pose, const CameraScene& scene,
    GradientMethod method = GradientMethod::FiniteDifference,
    double fd_step = 1e-6);

Objective reprojection_objective(
    const CameraScene& scene,
    GradientMethod method = GradientMethod::FiniteDifference);

/// Deterministic synthetic scene: world points are drawn in the ground-truth
/// camera's frustum with depth in [2, 50] and projected to exact pixels.
CameraScene synth_scene(int n_features, const Pose& pose, const Eigen::Matrix3d& K,
                        std::mt19937_64& rng);

}  // namespace lgvi
