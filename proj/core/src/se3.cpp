#include "rodcomp/se3.hpp"

#include <cmath>
#include <stdexcept>

namespace rodcomp {

namespace {

// sin(t)/t, (1-cos t)/t^2, (t-sin t)/t^3 with Taylor fallbacks near zero.
struct RodriguesCoeffs {
  double a, b, c;
};

RodriguesCoeffs rodrigues_coeffs(double theta) {
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    return {1.0 - t2 / 6.0 + t2 * t2 / 120.0,
            0.5 - t2 / 24.0 + t2 * t2 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0};
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double t2 = theta * theta;
  return {s / theta, (1.0 - c) / t2, (theta - s) / (t2 * theta)};
}

}  // namespace

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = position;
  return m;
}

Eigen::Matrix3d hat3(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Matrix4d hat6(const Twist& xi) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = hat3(xi.angular);
  m.topRightCorner<3, 1>() = xi.linear;
  return m;
}

Eigen::Vector3d vee3(const Eigen::Matrix3d& m, double tol) {
  const double contamination = (m + m.transpose()).cwiseAbs().maxCoeff() / 2.0;
  if (contamination > tol * (1.0 + m.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("vee3: matrix is not skew-symmetric (contamination " +
                                std::to_string(contamination) + ")");
  }
  return Eigen::Vector3d(m(2, 1), m(0, 2), m(1, 0));
}

Twist vee6(const Eigen::Matrix4d& m, double tol) {
  return Twist(vee3(m.topLeftCorner<3, 3>(), tol), m.topRightCorner<3, 1>());
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const auto [a, b, c] = rodrigues_coeffs(theta);
  (void)c;
  const Eigen::Matrix3d wx = hat3(w);
  return Eigen::Matrix3d::Identity() + a * wx + b * wx * wx;
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& R) {
  const double cos_theta = std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  const Eigen::Vector3d axis_raw(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  if (theta < 1e-8) {
    return 0.5 * axis_raw;
  }
  if (theta < M_PI - 1e-6) {
    return (theta / (2.0 * std::sin(theta))) * axis_raw;
  }
  // Near pi the sin-based form degenerates; recover the axis from R + R^T.
  const Eigen::Matrix3d sym = 0.5 * (R + R.transpose()) - cos_theta * Eigen::Matrix3d::Identity();
  int k;
  sym.diagonal().maxCoeff(&k);
  Eigen::Vector3d axis = sym.col(k) / std::sqrt(sym(k, k) * (1.0 - cos_theta));
  axis.normalize();
  if (axis.dot(axis_raw) < 0.0) axis = -axis;
  return theta * axis;
}

Pose exp_se3(const Twist& xi, double step) {
  const Eigen::Vector3d w = xi.angular * step;
  const Eigen::Vector3d v = xi.linear * step;
  const double theta = w.norm();
  const auto [a, b, c] = rodrigues_coeffs(theta);
  const Eigen::Matrix3d wx = hat3(w);
  const Eigen::Matrix3d wx2 = wx * wx;
  const Eigen::Matrix3d R = Eigen::Matrix3d::Identity() + a * wx + b * wx2;
  const Eigen::Matrix3d V = Eigen::Matrix3d::Identity() + b * wx + c * wx2;
  return Pose(R, V * v);
}

Twist log_se3(const Pose& T) {
  const Eigen::Vector3d w = log_so3(T.rotation);
  const double theta = w.norm();
  const Eigen::Matrix3d wx = hat3(w);
  double coeff;
  if (theta < 1e-6) {
    coeff = 1.0 / 12.0 + theta * theta / 720.0;
  } else {
    coeff = (1.0 - theta * std::sin(theta) / (2.0 * (1.0 - std::cos(theta)))) / (theta * theta);
  }
  const Eigen::Matrix3d v_inv = Eigen::Matrix3d::Identity() - 0.5 * wx + coeff * wx * wx;
  return Twist(w, v_inv * T.position);
}

Matrix6d hybrid_map(const Eigen::Matrix3d& R) {
  Matrix6d s = Matrix6d::Zero();
  s.topLeftCorner<3, 3>() = R;
  s.bottomRightCorner<3, 3>() = R;
  return s;
}

Matrix6d ad6(const Twist& xi) {
  Matrix6d m = Matrix6d::Zero();
  const Eigen::Matrix3d ux = hat3(xi.angular);
  m.topLeftCorner<3, 3>() = ux;
  m.bottomRightCorner<3, 3>() = ux;
  m.bottomLeftCorner<3, 3>() = hat3(xi.linear);
  return m;
}

Matrix6d adjoint(const Pose& T) {
  Matrix6d m = Matrix6d::Zero();
  m.topLeftCorner<3, 3>() = T.rotation;
  m.bottomRightCorner<3, 3>() = T.rotation;
  m.bottomLeftCorner<3, 3>() = hat3(T.position) * T.rotation;
  return m;
}

Matrix6d dexp_se3(const Twist& xi) {
  const double theta = xi.angular.norm();

  if (theta < 0.1) {
    // sum_k ad^k / (k+1)!  -- converges to machine precision for small
    // rotation angles regardless of the linear part (V enters linearly).
    const Matrix6d ad = ad6(xi);
    Matrix6d term = Matrix6d::Identity();
    Matrix6d sum = term;
    for (int k = 1; k <= 18; ++k) {
      term = (ad * term) / static_cast<double>(k + 1);
      sum += term;
    }
    return sum;
  }

  const Eigen::Matrix3d W = hat3(xi.angular);
  const Eigen::Matrix3d V = hat3(xi.linear);
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  const double t4 = t2 * t2;
  const double t5 = t4 * theta;
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const double s2t = std::sin(2.0 * theta);

  const double i2 = (theta - st) / t3;
  const double i3 = (t2 / 2.0 + ct - 1.0) / t4;
  const double i5 = (t2 / 2.0 + 1.0 - ct - theta * st) / t4;
  const double i6 = (1.0 - ct) * (1.0 - ct) / (2.0 * t4);
  const double i7 = (1.5 - 2.0 * st / theta + s2t / (4.0 * theta)) / t4;
  const double i8 = ((st - theta * ct) / theta - 0.5 + s2t / (4.0 * theta)) / t4;
  const double i9 = (theta / 2.0 - st + st * st / (2.0 * theta)) / t5;

  const Eigen::Matrix3d WV = W * V;
  const Eigen::Matrix3d VW = V * W;
  const Eigen::Matrix3d WW = W * W;

  const Eigen::Matrix3d Q = 0.5 * V
      + i2 * (WV + VW)
      + i3 * WW * V
      + (i3 + i5 - i6 - t2 * i9) * V * WW
      + (i6 - 2.0 * i3 + 2.0 * t2 * i9) * W * VW
      + i8 * WW * VW
      + (i7 - 2.0 * i8) * WV * WW
      + i9 * WW * V * WW;

  const Eigen::Matrix3d J = Eigen::Matrix3d::Identity() + ((1.0 - ct) / t2) * W + i2 * WW;

  Matrix6d out = Matrix6d::Zero();
  out.topLeftCorner<3, 3>() = J;
  out.bottomRightCorner<3, 3>() = J;
  out.bottomLeftCorner<3, 3>() = Q;
  return out;
}

}  // namespace rodcomp
