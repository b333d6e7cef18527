#include "lgvi/group.hpp"

#include <stdexcept>

namespace lgvi {

namespace {

void check_rotation(const Eigen::Matrix3d& R) {
  const double ortho = (R.transpose() * R - Eigen::Matrix3d::Identity()).norm();
  if (ortho > 1e-12) {
    throw std::invalid_argument("GroupPoint: matrix is not orthogonal, |R^T R - I| = " +
                                std::to_string(ortho));
  }
  const double det = R.determinant();
  if (det < 1.0 - 1e-9 || det > 1.0 + 1e-9) {
    throw std::invalid_argument("GroupPoint: det(R) = " + std::to_string(det) +
                                " is not 1");
  }
}

void check_same_shape(const GroupPoint& a, const GroupPoint& b) {
  if (a.kind() != b.kind() || a.vector_dim() != b.vector_dim()) {
    throw std::invalid_argument("GroupPoint: mismatched kinds or dimensions");
  }
}

}  // namespace

GroupPoint GroupPoint::rotation(const Eigen::Matrix3d& R) {
  check_rotation(R);
  return GroupPoint(GroupKind::SO3, R, Eigen::VectorXd());
}

GroupPoint GroupPoint::vector(const Eigen::VectorXd& x) {
  return GroupPoint(GroupKind::Rn, Eigen::Matrix3d::Identity(), x);
}

GroupPoint GroupPoint::product(const Eigen::Matrix3d& R, const Eigen::VectorXd& x) {
  check_rotation(R);
  return GroupPoint(GroupKind::Product, R, x);
}

GroupPoint GroupPoint::rotation_unchecked(const Eigen::Matrix3d& R) {
  return GroupPoint(GroupKind::SO3, R, Eigen::VectorXd());
}

GroupPoint GroupPoint::product_unchecked(const Eigen::Matrix3d& R,
                                         const Eigen::VectorXd& x) {
  return GroupPoint(GroupKind::Product, R, x);
}

GroupPoint GroupPoint::identity(GroupKind kind, int vec_dim) {
  switch (kind) {
    case GroupKind::SO3:
      return GroupPoint(kind, Eigen::Matrix3d::Identity(), Eigen::VectorXd());
    case GroupKind::Rn:
      return GroupPoint(kind, Eigen::Matrix3d::Identity(),
                        Eigen::VectorXd::Zero(vec_dim));
    case GroupKind::Product:
      return GroupPoint(kind, Eigen::Matrix3d::Identity(),
                        Eigen::VectorXd::Zero(vec_dim));
  }
  throw std::invalid_argument("GroupPoint: unknown kind");
}

int GroupPoint::algebra_dim() const {
  switch (kind_) {
    case GroupKind::SO3:
      return 3;
    case GroupKind::Rn:
      return vector_dim();
    case GroupKind::Product:
      return 3 + vector_dim();
  }
  return 0;
}

GroupPoint compose(const GroupPoint& a, const GroupPoint& b) {
  check_same_shape(a, b);
  switch (a.kind()) {
    case GroupKind::SO3:
      return GroupPoint::rotation_unchecked(a.rot() * b.rot());
    case GroupKind::Rn:
      return GroupPoint::vector(a.vec() + b.vec());
    case GroupKind::Product:
      return GroupPoint::product_unchecked(a.rot() * b.rot(), a.vec() + b.vec());
  }
  throw std::invalid_argument("compose: unknown kind");
}

GroupPoint inverse(const GroupPoint& a) {
  switch (a.kind()) {
    case GroupKind::SO3:
      return GroupPoint::rotation_unchecked(a.rot().transpose());
    case GroupKind::Rn:
      return GroupPoint::vector(-a.vec());
    case GroupKind::Product:
      return GroupPoint::product_unchecked(a.rot().transpose(), -a.vec());
  }
  throw std::invalid_argument("inverse: unknown kind");
}

GroupPoint group_exp(GroupKind kind, const Eigen::VectorXd& xi) {
  switch (kind) {
    case GroupKind::SO3:
      if (xi.size() != 3) throw std::invalid_argument("group_exp: so(3) needs 3 coords");
      return GroupPoint::rotation(exp_so3<double>(xi.head<3>()));
    case GroupKind::Rn:
      return GroupPoint::vector(xi);
    case GroupKind::Product:
      if (xi.size() < 3) throw std::invalid_argument("group_exp: product needs >= 3 coords");
      return GroupPoint::product(exp_so3<double>(xi.head<3>()), xi.tail(xi.size() - 3));
  }
  throw std::invalid_argument("group_exp: unknown kind");
}

Eigen::VectorXd group_log(const GroupPoint& g) {
  switch (g.kind()) {
    case GroupKind::SO3:
      return log_so3<double>(g.rot());
    case GroupKind::Rn:
      return g.vec();
    case GroupKind::Product: {
      Eigen::VectorXd xi(g.algebra_dim());
      xi.head<3>() = log_so3<double>(g.rot());
      xi.tail(g.vector_dim()) = g.vec();
      return xi;
    }
  }
  throw std::invalid_argument("group_log: unknown kind");
}

namespace {

void check_coords(const GroupPoint& g, const Eigen::VectorXd& v, const char* who) {
  if (v.size() != g.algebra_dim()) {
    throw std::invalid_argument(std::string(who) + ": coordinate size " +
                                std::to_string(v.size()) + " != algebra dim " +
                                std::to_string(g.algebra_dim()));
  }
}

}  // namespace

Eigen::VectorXd adjoint(const GroupPoint& F, const Eigen::VectorXd& eta) {
  check_coords(F, eta, "adjoint");
  switch (F.kind()) {
    case GroupKind::SO3:
      return F.rot() * eta;
    case GroupKind::Rn:
      return eta;
    case GroupKind::Product: {
      Eigen::VectorXd out = eta;
      out.head<3>() = F.rot() * eta.head<3>();
      return out;
    }
  }
  throw std::invalid_argument("adjoint: unknown kind");
}

Eigen::VectorXd coadjoint(const GroupPoint& F, const Eigen::VectorXd& mu) {
  check_coords(F, mu, "coadjoint");
  switch (F.kind()) {
    case GroupKind::SO3:
      return F.rot().transpose() * mu;
    case GroupKind::Rn:
      return mu;
    case GroupKind::Product: {
      Eigen::VectorXd out = mu;
      out.head<3>() = F.rot().transpose() * mu.head<3>();
      return out;
    }
  }
  throw std::invalid_argument("coadjoint: unknown kind");
}

Eigen::VectorXd coad_star(GroupKind kind, const Eigen::VectorXd& xi,
                          const Eigen::VectorXd& mu) {
  if (xi.size() != mu.size()) {
    throw std::invalid_argument("coad_star: mismatched coordinate sizes");
  }
  switch (kind) {
    case GroupKind::SO3: {
      Eigen::Vector3d m = mu.head<3>(), x = xi.head<3>();
      return m.cross(x);
    }
    case GroupKind::Rn:
      return Eigen::VectorXd::Zero(mu.size());
    case GroupKind::Product: {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(mu.size());
      Eigen::Vector3d m = mu.head<3>(), x = xi.head<3>();
      out.head<3>() = m.cross(x);
      return out;
    }
  }
  throw std::invalid_argument("coad_star: unknown kind");
}

Eigen::VectorXd coad_star(const GroupPoint& reference_kind, const Eigen::VectorXd& xi,
                          const Eigen::VectorXd& mu) {
  return coad_star(reference_kind.kind(), xi, mu);
}

double rotation_distance(const GroupPoint& a, const GroupPoint& b) {
  double d = 0.0;
  if (a.has_rotation()) {
    d += log_so3<double>(Eigen::Matrix3d(a.rot().transpose() * b.rot())).norm();
  }
  if (a.has_vector()) {
    d += (a.vec() - b.vec()).norm();
  }
  return d;
}

// ---------------------------------------------------------------------------
// MetricOperator

MetricOperator::MetricOperator(GroupKind kind, const Eigen::Matrix3d& J_rot,
                               const Eigen::MatrixXd& J_vec)
    : kind_(kind), J_rot_(J_rot), J_vec_(J_vec) {
  auto check_spd = [](const Eigen::MatrixXd& J, const char* name) {
    if ((J - J.transpose()).norm() > 1e-10 * (1.0 + J.norm())) {
      throw std::invalid_argument(std::string("MetricOperator: ") + name +
                                  " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw std::invalid_argument(std::string("MetricOperator: ") + name +
                                  " is not positive-definite");
    }
  };
  if (kind_ != GroupKind::Rn) check_spd(J_rot_, "rotation block");
  if (kind_ != GroupKind::SO3 && J_vec_.size() > 0) check_spd(J_vec_, "vector block");
  Jd_ = 0.5 * J_rot_.trace() * Eigen::Matrix3d::Identity() - J_rot_;
  rot_llt_.compute(J_rot_);
  if (J_vec_.size() > 0) vec_llt_.compute(J_vec_);
}

MetricOperator MetricOperator::identity(GroupKind kind, int vec_dim) {
  return MetricOperator(kind, Eigen::Matrix3d::Identity(),
                        Eigen::MatrixXd::Identity(vec_dim, vec_dim));
}

MetricOperator MetricOperator::so3(const Eigen::Matrix3d& J) {
  return MetricOperator(GroupKind::SO3, J, Eigen::MatrixXd());
}

MetricOperator MetricOperator::rn(const Eigen::MatrixXd& J) {
  return MetricOperator(GroupKind::Rn, Eigen::Matrix3d::Identity(), J);
}

MetricOperator MetricOperator::product(const Eigen::Matrix3d& J_rot,
                                       const Eigen::MatrixXd& J_vec) {
  return MetricOperator(GroupKind::Product, J_rot, J_vec);
}

int MetricOperator::dim() const {
  switch (kind_) {
    case GroupKind::SO3:
      return 3;
    case GroupKind::Rn:
      return static_cast<int>(J_vec_.rows());
    case GroupKind::Product:
      return 3 + static_cast<int>(J_vec_.rows());
  }
  return 0;
}

bool MetricOperator::rotation_isotropic(double tol) const {
  return (J_rot_ - J_rot_(0, 0) * Eigen::Matrix3d::Identity()).norm() <= tol;
}

Eigen::VectorXd MetricOperator::apply(const Eigen::VectorXd& xi) const {
  if (xi.size() != dim()) throw std::invalid_argument("MetricOperator: bad size");
  switch (kind_) {
    case GroupKind::SO3:
      return J_rot_ * xi;
    case GroupKind::Rn:
      return J_vec_ * xi;
    case GroupKind::Product: {
      Eigen::VectorXd out(xi.size());
      out.head<3>() = J_rot_ * xi.head<3>();
      out.tail(xi.size() - 3) = J_vec_ * xi.tail(xi.size() - 3);
      return out;
    }
  }
  throw std::invalid_argument("MetricOperator: unknown kind");
}

Eigen::VectorXd MetricOperator::solve(const Eigen::VectorXd& mu) const {
  if (mu.size() != dim()) throw std::invalid_argument("MetricOperator: bad size");
  switch (kind_) {
    case GroupKind::SO3:
      return rot_llt_.solve(mu);
    case GroupKind::Rn:
      return vec_llt_.solve(mu);
    case GroupKind::Product: {
      Eigen::VectorXd out(mu.size());
      out.head<3>() = rot_llt_.solve(Eigen::Vector3d(mu.head<3>()));
      out.tail(mu.size() - 3) = vec_llt_.solve(Eigen::VectorXd(mu.tail(mu.size() - 3)));
      return out;
    }
  }
  throw std::invalid_argument("MetricOperator: unknown kind");
}

}  // namespace lgvi
