#include "lgvi/camera.hpp"

#include <cmath>
#include <stdexcept>

#include "lgvi/errors.hpp"

namespace lgvi {

void CameraScene::validate_for_solve() const {
  if (std::abs(K.determinant()) < 1e-12) {
    throw DegenerateProblemError("CameraScene: K is not invertible");
  }
  if (features.size() < 6) {
    throw DegenerateProblemError(
        "CameraScene: need at least 6 features, have " +
        std::to_string(features.size()));
  }
}

Eigen::Vector2d project(const Pose& pose, const Eigen::Matrix3d& K,
                        const Eigen::Vector3d& world_point, int feature_index) {
  const Eigen::Vector3d cam = pose.R * world_point + pose.x;
  if (cam.z() <= 0.0) throw BehindCameraError(feature_index);
  const Eigen::Vector3d p = K * cam;
  return Eigen::Vector2d(p.x() / p.z(), p.y() / p.z());
}

double reprojection_eval(const Pose& pose, const CameraScene& scene) {
  double f = 0.0;
  for (size_t i = 0; i < scene.features.size(); ++i) {
    const Eigen::Vector2d reproj =
        project(pose, scene.K, scene.features[i].world, static_cast<int>(i));
    f += (scene.features[i].pixel - reproj).squaredNorm();
  }
  return f;
}

namespace {

Eigen::VectorXd analytic_grad(const Pose& pose, const CameraScene& scene) {
  Eigen::Vector3d g_rot = Eigen::Vector3d::Zero();
  Eigen::Vector3d g_vec = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < scene.features.size(); ++i) {
    const Eigen::Vector3d& X = scene.features[i].world;
    const Eigen::Vector3d cam = pose.R * X + pose.x;
    if (cam.z() <= 0.0) throw BehindCameraError(static_cast<int>(i));
    const Eigen::Vector3d q = scene.K * cam;
    const Eigen::Vector2d reproj(q.x() / q.z(), q.y() / q.z());
    const Eigen::Vector2d r = reproj - scene.features[i].pixel;
    Eigen::Matrix<double, 2, 3> dpi;
    // clang-format off
    dpi << 1.0 / q.z(),         0.0, -q.x() / (q.z() * q.z()),
                   0.0, 1.0 / q.z(), -q.y() / (q.z() * q.z());
    // clang-format on
    const Eigen::Matrix<double, 2, 3> JK = dpi * scene.K;
    // d(R X + x) along (R exp(s eta), x + s delta): R (eta x X) + delta
    g_rot += 2.0 * (JK * pose.R * (-hat(X))).transpose() * r;
    g_vec += 2.0 * JK.transpose() * r;
  }
  Eigen::VectorXd g(6);
  g.head<3>() = g_rot;
  g.tail<3>() = g_vec;
  return g;
}

}  // namespace

Eigen::VectorXd reprojection_grad(const Pose& pose, const CameraScene& scene,
                                  GradientMethod method, double fd_step) {
  if (method == GradientMethod::Analytic) return analytic_grad(pose, scene);
  const GroupPoint g = pose.as_group_point();
  return numeric_left_gradient(
      [&scene](const GroupPoint& p) {
        return reprojection_eval(Pose::from_group_point(p), scene);
      },
      g, fd_step);
}

Objective reprojection_objective(const CameraScene& scene, GradientMethod method) {
  Objective obj;
  obj.value = [scene](const GroupPoint& g) {
    return reprojection_eval(Pose::from_group_point(g), scene);
  };
  obj.grad = [scene, method](const GroupPoint& g) {
    return reprojection_grad(Pose::from_group_point(g), scene, method);
  };
  return obj;
}

CameraScene synth_scene(int n_features, const Pose& pose, const Eigen::Matrix3d& K,
                        std::mt19937_64& rng) {
  if (n_features < 6) {
    throw std::invalid_argument("synth_scene: need at least 6 features");
  }
  CameraScene scene;
  scene.K = K;
  scene.ground_truth = pose;
  const Eigen::Matrix3d K_inv = K.inverse();
  // Pixel extent from the principal point; falls back to a unit-K frustum.
  const double cx = K(0, 2), cy = K(1, 2);
  const double umax = cx > 0.0 ? 2.0 * cx : 1.0;
  const double vmax = cy > 0.0 ? 2.0 * cy : 1.0;
  std::uniform_real_distribution<double> du(0.0, umax), dv(0.0, vmax),
      dd(2.0, 50.0);
  scene.features.reserve(static_cast<size_t>(n_features));
  for (int i = 0; i < n_features; ++i) {
    const double u = du(rng), v = dv(rng), depth = dd(rng);
    const Eigen::Vector3d cam = depth * (K_inv * Eigen::Vector3d(u, v, 1.0));
    const Eigen::Vector3d world = pose.R.transpose() * (cam - pose.x);
    Feature feat;
    feat.world = world;
    feat.pixel = project(pose, K, world, i);
    scene.features.push_back(feat);
  }
  return scene;
}

}  // namespace lgvi
