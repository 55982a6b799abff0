#pragma once

#include <Eigen/Core>

namespace rodcomp {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Body twist with angular-first ordering: [u; v].
struct Twist {
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();

  Twist() = default;
  Twist(const Eigen::Vector3d& ang, const Eigen::Vector3d& lin) : angular(ang), linear(lin) {}

  Vector6d vec() const {
    Vector6d out;
    out << angular, linear;
    return out;
  }
  static Twist from_vec(const Vector6d& v) { return Twist(v.head<3>(), v.tail<3>()); }
};

// Wrench with moment-first ordering: [m; f].
struct Wrench {
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
  Eigen::Vector3d force = Eigen::Vector3d::Zero();

  Wrench() = default;
  Wrench(const Eigen::Vector3d& m, const Eigen::Vector3d& f) : moment(m), force(f) {}

  Vector6d vec() const {
    Vector6d out;
    out << moment, force;
    return out;
  }
  static Wrench from_vec(const Vector6d& v) { return Wrench(v.head<3>(), v.tail<3>()); }
};

// Rigid transform. rotation must stay special orthogonal; all factory
// functions in this library preserve that to ~1e-12.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d position = Eigen::Vector3d::Zero();

  Pose() = default;
  Pose(const Eigen::Matrix3d& R, const Eigen::Vector3d& p) : rotation(R), position(p) {}

  Eigen::Matrix4d matrix() const;
  Pose inverse() const { return Pose(rotation.transpose(), -(rotation.transpose() * position)); }
  Pose operator*(const Pose& rhs) const {
    return Pose(rotation * rhs.rotation, rotation * rhs.position + position);
  }
};

/// Skew-symmetric cross-product matrix: hat3(a) * b == a x b.
Eigen::Matrix3d hat3(const Eigen::Vector3d& v);

/// 4x4 se(3) matrix of a twist: [hat3(u), v; 0, 0].
Eigen::Matrix4d hat6(const Twist& xi);

/// Inverse of hat3. Rejects matrices whose symmetric part exceeds tol.
Eigen::Vector3d vee3(const Eigen::Matrix3d& m, double tol = 1e-8);

/// Inverse of hat6; same skewness check on the rotation block.
Twist vee6(const Eigen::Matrix4d& m, double tol = 1e-8);

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w);

/// Rotation vector of R. Well defined for angles in [0, pi].
Eigen::Vector3d log_so3(const Eigen::Matrix3d& R);

/// Closed-form exponential of hat6(xi) * step.
Pose exp_se3(const Twist& xi, double step = 1.0);

Twist log_se3(const Pose& T);

/// Block-diagonal (R, R) map taking body twists to the hybrid frame.
Matrix6d hybrid_map(const Eigen::Matrix3d& R);

/// Little adjoint ad_xi, angular-first: [[hat(u), 0], [hat(v), hat(u)]].
Matrix6d ad6(const Twist& xi);

/// Adjoint of a rigid transform: [[R, 0], [hat(p) R, R]].
Matrix6d adjoint(const Pose& T);

/// Right-trivialized derivative of the exponential map:
/// (exp(xi + eps*delta) * exp(xi)^-1)^vee / eps -> dexp_se3(xi) * delta.
Matrix6d dexp_se3(const Twist& xi);

}  // namespace rodcomp
