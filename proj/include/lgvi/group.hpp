#pragma once

#include <Eigen/Dense>

#include "lgvi/so3.hpp"

namespace lgvi {

enum class GroupKind { SO3, Rn, Product };

/// Element of SO(3), R^n, or SO(3) x R^n. Immutable value type; SO(3)
/// payloads are validated at construction and never re-orthonormalized
/// afterwards, so that drift stays a measurable quantity.
class GroupPoint {
 public:
  static GroupPoint rotation(const Eigen::Matrix3d& R);
  static GroupPoint vector(const Eigen::VectorXd& x);
  static GroupPoint product(const Eigen::Matrix3d& R, const Eigen::VectorXd& x);
  /// Skips the orthogonality check; meant for compositions of elements that
  /// are already on the group, where accumulated drift is the observable.
  static GroupPoint rotation_unchecked(const Eigen::Matrix3d& R);
  static GroupPoint product_unchecked(const Eigen::Matrix3d& R,
                                      const Eigen::VectorXd& x);
  static GroupPoint identity(GroupKind kind, int vec_dim = 0);

  GroupKind kind() const { return kind_; }
  /// Dimension of the associated algebra (3, n, or 3 + n).
  int algebra_dim() const;
  int vector_dim() const { return static_cast<int>(vec_.size()); }

  const Eigen::Matrix3d& rot() const { return rot_; }
  const Eigen::VectorXd& vec() const { return vec_; }

  bool has_rotation() const { return kind_ != GroupKind::Rn; }
  bool has_vector() const { return kind_ != GroupKind::SO3; }

 private:
  GroupPoint(GroupKind kind, const Eigen::Matrix3d& R, const Eigen::VectorXd& x)
      : kind_(kind), rot_(R), vec_(x) {}

  GroupKind kind_;
  Eigen::Matrix3d rot_;
  Eigen::VectorXd vec_;
};

GroupPoint compose(const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const GroupPoint& a);

/// exp: algebra coordinates -> group element (Rodrigues on the rotation
/// block, identity map on the vector block).
GroupPoint group_exp(GroupKind kind, const Eigen::VectorXd& xi);
/// log: group element -> algebra coordinates; subject to log_so3's near-pi
/// restriction on the rotation block.
Eigen::VectorXd group_log(const GroupPoint& g);

/// Ad_F eta; on SO(3) this is F*eta, on R^n the identity, blockwise on the
/// product.
Eigen::VectorXd adjoint(const GroupPoint& F, const Eigen::VectorXd& eta);
/// Ad*_F mu (= F^T mu on SO(3)).
Eigen::VectorXd coadjoint(const GroupPoint& F, const Eigen::VectorXd& mu);
/// ad*_xi mu (= mu x xi on so(3), zero on R^n).
Eigen::VectorXd coad_star(const GroupPoint& reference_kind,
                          const Eigen::VectorXd& xi, const Eigen::VectorXd& mu);
Eigen::VectorXd coad_star(GroupKind kind, const Eigen::VectorXd& xi,
                          const Eigen::VectorXd& mu);

/// Geodesic (bi-invariant) distance on the rotation part; Euclidean on the
/// vector part.
double rotation_distance(const GroupPoint& a, const GroupPoint& b);

/// Symmetric positive-definite metric operator J on the algebra, stored
/// blockwise: a 3x3 block for so(3) and an n x n block for R^n. Also carries
/// the derived nonstandard moment of inertia J_d = tr(J)/2 I - J used by the
/// discrete kinetic energy on SO(3).
class MetricOperator {
 public:
  static MetricOperator identity(GroupKind kind, int vec_dim = 0);
  static MetricOperator so3(const Eigen::Matrix3d& J);
  static MetricOperator rn(const Eigen::MatrixXd& J);
  static MetricOperator product(const Eigen::Matrix3d& J_rot,
                                const Eigen::MatrixXd& J_vec);

  GroupKind kind() const { return kind_; }
  int dim() const;

  const Eigen::Matrix3d& rot_block() const { return J_rot_; }
  const Eigen::MatrixXd& vec_block() const { return J_vec_; }
  const Eigen::Matrix3d& jd() const { return Jd_; }

  /// True when the rotation block is c*I (enables the explicit Eq-solve path).
  bool rotation_isotropic(double tol = 1e-12) const;
  double rotation_scale() const { return J_rot_(0, 0); }

  Eigen::VectorXd apply(const Eigen::VectorXd& xi) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& mu) const;

 private:
  MetricOperator(GroupKind kind, const Eigen::Matrix3d& J_rot,
                 const Eigen::MatrixXd& J_vec);

  GroupKind kind_;
  Eigen::Matrix3d J_rot_;
  Eigen::MatrixXd J_vec_;
  Eigen::Matrix3d Jd_;
  Eigen::LLT<Eigen::Matrix3d> rot_llt_;
  Eigen::LLT<Eigen::MatrixXd> vec_llt_;
};

}  // namespace lgvi
