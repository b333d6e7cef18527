#include <doctest.h>

#include <random>

#include "lgvi/group.hpp"
#include "lgvi/so3.hpp"

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;
using lgvi::GroupKind;
using lgvi::GroupPoint;

namespace {

GroupPoint random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return GroupPoint::rotation(lgvi::exp_so3(Vector3d(u(rng), u(rng), u(rng))));
}

}  // namespace

TEST_CASE("rotation construction enforces orthogonality and determinant") {
  CHECK_NOTHROW(GroupPoint::rotation(Matrix3d::Identity()));
  CHECK_THROWS_AS(GroupPoint::rotation(Matrix3d(2.0 * Matrix3d::Identity())),
                  std::invalid_argument);
  Matrix3d reflection = Matrix3d::Identity();
  reflection(2, 2) = -1.0;  // orthogonal but det -1
  CHECK_THROWS_AS(GroupPoint::rotation(reflection), std::invalid_argument);
}

TEST_CASE("composing with the identity is a no-op") {
  std::mt19937_64 rng(3);
  const GroupPoint R = random_rotation(rng);
  const GroupPoint I = GroupPoint::identity(GroupKind::SO3);
  CHECK((lgvi::compose(R, I).rot() - R.rot()).norm() <= 1e-15);
  CHECK((lgvi::compose(I, R).rot() - R.rot()).norm() <= 1e-15);
}

TEST_CASE("composing with the inverse gives the identity") {
  std::mt19937_64 rng(5);
  const GroupPoint R = random_rotation(rng);
  CHECK((lgvi::compose(R, lgvi::inverse(R)).rot() - Matrix3d::Identity())
            .norm() <= 1e-12);
  VectorXd x(3);
  x << 1, -2, 3;
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const GroupPoint g = GroupPoint::product(
      lgvi::exp_so3(Vector3d(u(rng), u(rng), u(rng))), x);
  const GroupPoint e = lgvi::compose(g, lgvi::inverse(g));
  CHECK((e.rot() - Matrix3d::Identity()).norm() <= 1e-12);
  CHECK(e.vec().norm() <= 1e-12);
}

TEST_CASE("vector composition is addition") {
  VectorXd a(2), b(2);
  a << 1, 2;
  b << 3, 4;
  const VectorXd c =
      lgvi::compose(GroupPoint::vector(a), GroupPoint::vector(b)).vec();
  CHECK(c(0) == 4.0);
  CHECK(c(1) == 6.0);
}

TEST_CASE("composition rejects mismatched kinds and dimensions") {
  const GroupPoint R = GroupPoint::identity(GroupKind::SO3);
  const GroupPoint v = GroupPoint::vector(VectorXd::Zero(2));
  CHECK_THROWS_AS(lgvi::compose(R, v), std::invalid_argument);
  CHECK_THROWS_AS(lgvi::compose(v, GroupPoint::vector(VectorXd::Zero(3))),
                  std::invalid_argument);
}

TEST_CASE("group exp and log round-trip on all three kinds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    VectorXd xi(6);
    for (int j = 0; j < 6; ++j) xi(j) = u(rng);
    const VectorXd back = lgvi::group_log(lgvi::group_exp(GroupKind::Product, xi));
    CHECK((back - xi).norm() <= 1e-10);
  }
  VectorXd w(4);
  w << 1, 2, 3, 4;
  CHECK((lgvi::group_log(lgvi::group_exp(GroupKind::Rn, w)) - w).norm() == 0.0);
}

TEST_CASE("adjoint of the identity is the identity map") {
  VectorXd eta(3);
  eta << 1, -1, 2;
  CHECK((lgvi::adjoint(GroupPoint::identity(GroupKind::SO3), eta) - eta).norm() ==
        0.0);
}

TEST_CASE("coadjoint undoes adjoint on rotations") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const GroupPoint F = random_rotation(rng);
    VectorXd eta(3);
    eta << u(rng), u(rng), u(rng);
    CHECK((lgvi::coadjoint(F, lgvi::adjoint(F, eta)) - eta).norm() <= 1e-12);
  }
}

TEST_CASE("coad_star of parallel vectors vanishes") {
  VectorXd xi(3);
  xi << 1, 2, 3;
  CHECK(lgvi::coad_star(GroupKind::SO3, xi, xi).norm() == 0.0);
}

TEST_CASE("coad_star is zero on the abelian factor") {
  VectorXd xi(2), mu(2);
  xi << 1, 2;
  mu << 3, 4;
  CHECK(lgvi::coad_star(GroupKind::Rn, xi, mu).norm() == 0.0);
  VectorXd xi6(6), mu6(6);
  xi6 << 1, 0, 0, 5, 6, 7;
  mu6 << 0, 1, 0, 8, 9, 10;
  const VectorXd out = lgvi::coad_star(GroupKind::Product, xi6, mu6);
  CHECK((out.head<3>() - mu6.head<3>().cross(xi6.head<3>())).norm() == 0.0);
  CHECK(out.tail<3>().norm() == 0.0);
}

TEST_CASE("metric operator applies and solves consistently") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Matrix3d J = Vector3d(1, 2, 3).asDiagonal();
  const auto metric = lgvi::MetricOperator::so3(J);
  for (int i = 0; i < 50; ++i) {
    VectorXd xi(3);
    xi << u(rng), u(rng), u(rng);
    CHECK((metric.solve(metric.apply(xi)) - xi).norm() <= 1e-12);
    if (xi.norm() > 1e-8) CHECK(metric.apply(xi).dot(xi) > 0.0);
  }
}

TEST_CASE("derived rotation metric matrix has the right closed form") {
  const Matrix3d J = Vector3d(1, 2, 3).asDiagonal();
  const Matrix3d expected =
      0.5 * J.trace() * Matrix3d::Identity() - J;  // diag(2, 1, 0)
  CHECK((lgvi::MetricOperator::so3(J).jd() - expected).norm() == 0.0);
  CHECK(lgvi::MetricOperator::identity(GroupKind::SO3).rotation_isotropic());
  CHECK(!lgvi::MetricOperator::so3(J).rotation_isotropic());
}

TEST_CASE("metric operator rejects non-SPD input") {
  CHECK_THROWS_AS(
      lgvi::MetricOperator::so3(Matrix3d(Vector3d(1, -1, 1).asDiagonal())),
      std::invalid_argument);
  Matrix3d asym = Matrix3d::Identity();
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(lgvi::MetricOperator::so3(asym), std::invalid_argument);
}
