#include <doctest.h>

#include <Eigen/Geometry>
#include <random>

#include "rodcomp/se3.hpp"
#include "test_support.hpp"

using namespace rodcomp;
using rodcomp::testing::random_twist;
using rodcomp::testing::random_vec3;

TEST_CASE("hat3 basics") {
  CHECK(hat3(Eigen::Vector3d::Zero()).isZero(0.0));

  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  CHECK((hat3(Eigen::Vector3d::UnitZ()) - expected).norm() == 0.0);

  std::mt19937 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d a = random_vec3(rng, 2.0);
    const Eigen::Vector3d b = random_vec3(rng, 2.0);
    CHECK((hat3(a) * b - a.cross(b)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((hat3(a).transpose() + hat3(a)).norm() == 0.0);
  }
}

TEST_CASE("hat3 is linear") {
  std::mt19937 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d a = random_vec3(rng);
    const Eigen::Vector3d b = random_vec3(rng);
    CHECK((hat3(2.5 * a + 0.75 * b) - (2.5 * hat3(a) + 0.75 * hat3(b))).norm() == 0.0);
  }
}

TEST_CASE("hat6 block layout") {
  CHECK(hat6(Twist()).isZero(0.0));

  const Twist xi(Eigen::Vector3d(0.3, -0.2, 0.9), Eigen::Vector3d::UnitZ());
  const Eigen::Matrix4d m = hat6(xi);
  CHECK((m.topLeftCorner<3, 3>() - hat3(xi.angular)).norm() == 0.0);
  CHECK((m.topRightCorner<3, 1>() - xi.linear).norm() == 0.0);
  CHECK(m.row(3).norm() == 0.0);

  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Twist t = random_twist(rng);
    const Twist back = vee6(hat6(t));
    CHECK((back.vec() - t.vec()).norm() == 0.0);
  }
}

TEST_CASE("vee rejects contaminated matrices") {
  CHECK(vee3(Eigen::Matrix3d::Zero()).isZero(0.0));

  Eigen::Matrix3d skew = hat3(Eigen::Vector3d(0.1, 0.2, 0.3));
  skew(0, 1) += 1e-3;  // symmetric contamination
  CHECK_THROWS_AS(vee3(skew), std::invalid_argument);

  Eigen::Matrix4d bad = hat6(Twist(Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector3d::UnitX()));
  bad(1, 0) += 1e-3;
  CHECK_THROWS_AS(vee6(bad), std::invalid_argument);
}

TEST_CASE("exp_se3 closed forms") {
  // identity
  const Pose id = exp_se3(Twist(), 1.0);
  CHECK(id.rotation.isIdentity(0.0));
  CHECK(id.position.isZero(0.0));

  // pure translation
  const double L = 0.37;
  const Pose line = exp_se3(Twist(Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ()), L);
  CHECK(line.rotation.isIdentity(0.0));
  CHECK((line.position - Eigen::Vector3d(0, 0, L)).norm() < 1e-15);

  // constant-curvature arc; closed form from integrating the frame ODE:
  // p = (0, -(1 - cos kL)/k, sin(kL)/k)
  const double kappa = 2.0, len = 0.5;
  const Pose arc = exp_se3(Twist(Eigen::Vector3d(kappa, 0, 0), Eigen::Vector3d::UnitZ()), len);
  const Eigen::Vector3d expected(0.0, -(1.0 - std::cos(kappa * len)) / kappa,
                                 std::sin(kappa * len) / kappa);
  CHECK((arc.position - expected).norm() < 1e-14);

  // cross-check against dense numerical integration of the same ODE
  const ShapeBasis constant_basis = ShapeBasis::uniform(0, len);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
  c(0) = kappa;
  const Pose dense = rodcomp::testing::dense_pose_reference(constant_basis, c, 20000);
  CHECK((arc.position - dense.position).norm() < 1e-10);
  CHECK((arc.rotation - dense.rotation).norm() < 1e-10);
}

TEST_CASE("exp_se3 one-parameter subgroup and orthonormality") {
  std::mt19937 rng(4);
  for (int i = 0; i < 50; ++i) {
    const Twist xi = random_twist(rng, 3.0, 1.0);
    const Pose a = exp_se3(xi, 0.4);
    const Pose b = exp_se3(xi, 0.35);
    const Pose ab = a * b;
    const Pose direct = exp_se3(xi, 0.75);
    CHECK((ab.matrix() - direct.matrix()).norm() < 1e-12);
    CHECK(rodcomp::testing::orthonormality_defect(a.rotation) < 1e-10);
    CHECK(std::abs(a.rotation.determinant() - 1.0) < 1e-10);
  }
}

TEST_CASE("exp small-angle branch is consistent with the trig branch") {
  // |w| = 1.6e-4 uses the trig branch; halving the step lands both factors
  // in the Taylor branch, and the subgroup property ties them together
  const Eigen::Vector3d axis = Eigen::Vector3d(1.0, -2.0, 0.5).normalized();
  const Twist xi(axis * 1.6e-4, Eigen::Vector3d(0.3, 0.1, 0.9));
  const Pose whole = exp_se3(xi, 1.0);
  const Pose half = exp_se3(xi, 0.5);
  CHECK(((half * half).matrix() - whole.matrix()).norm() < 1e-12);
}

TEST_CASE("log_so3 round trips") {
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::uniform_real_distribution<double> ang(0.0, M_PI - 1e-9);
    const Eigen::Vector3d w = random_vec3(rng).normalized() * ang(rng);
    const Eigen::Matrix3d r = exp_so3(w);
    CHECK((log_so3(r) - w).norm() < 1e-9 * (1.0 + w.norm()));
  }
  // near pi
  const Eigen::Vector3d w_pi = Eigen::Vector3d(0.3, -0.5, 0.2).normalized() * (M_PI - 1e-9);
  CHECK((exp_so3(log_so3(exp_so3(w_pi))) - exp_so3(w_pi)).norm() < 1e-7);
}

TEST_CASE("hybrid_map structure") {
  CHECK(hybrid_map(Eigen::Matrix3d::Identity()).isIdentity(0.0));

  std::mt19937 rng(6);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix3d r = exp_so3(random_vec3(rng, 2.0));
    const Matrix6d s = hybrid_map(r);
    const Twist xi = random_twist(rng);
    Vector6d mapped = s * xi.vec();
    CHECK((mapped.head<3>() - r * xi.angular).norm() < 1e-14);
    CHECK((mapped.tail<3>() - r * xi.linear).norm() < 1e-14);
    CHECK((s.transpose() * s - Matrix6d::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("dexp_se3 at zero and for small arguments") {
  CHECK(dexp_se3(Twist()).isIdentity(0.0));

  // leading series terms: dexp ~ I + ad/2 for small xi. The sign is pinned
  // by the finite-difference invariant below.
  const Twist tiny(Eigen::Vector3d(1e-6, -2e-6, 0.5e-6), Eigen::Vector3d(2e-6, 1e-6, -1e-6));
  const Matrix6d expected = Matrix6d::Identity() + 0.5 * ad6(tiny);
  CHECK((dexp_se3(tiny) - expected).norm() < 1e-10);
}

TEST_CASE("dexp_se3 matches finite differences of the exponential") {
  std::mt19937 rng(7);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Twist xi = random_twist(rng, 2.5, 1.0);
    const Matrix6d d = dexp_se3(xi);
    const Pose base_inv = exp_se3(xi, 1.0).inverse();
    const double eps = 1e-6;
    Matrix6d fd;
    for (int j = 0; j < 6; ++j) {
      Vector6d delta = Vector6d::Zero();
      delta(j) = eps;
      const Pose plus = exp_se3(Twist::from_vec(xi.vec() + delta), 1.0);
      const Pose minus = exp_se3(Twist::from_vec(xi.vec() - delta), 1.0);
      fd.col(j) =
          (log_se3(plus * base_inv).vec() - log_se3(minus * base_inv).vec()) / (2.0 * eps);
    }
    worst = std::max(worst, (fd - d).norm() / d.norm());
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("dexp_se3 branch crossover is seamless") {
  const Eigen::Vector3d axis = Eigen::Vector3d(0.2, 0.9, -0.4).normalized();
  const Eigen::Vector3d v(1.0, -0.5, 2.0);
  const Matrix6d below = dexp_se3(Twist(axis * 0.0999, v));
  const Matrix6d above = dexp_se3(Twist(axis * 0.1001, v));
  CHECK((below - above).norm() < 1e-3 * below.norm());
  // and against the defining series at a mid-range angle
  const Twist xi(axis * 0.7, v);
  Matrix6d term = Matrix6d::Identity(), series = term;
  for (int k = 1; k <= 40; ++k) {
    term = (ad6(xi) * term) / static_cast<double>(k + 1);
    series += term;
  }
  CHECK((dexp_se3(xi) - series).norm() < 1e-13 * series.norm());
}

TEST_CASE("adjoint and ad are compatible") {
  std::mt19937 rng(8);
  for (int i = 0; i < 20; ++i) {
    const Twist xi = random_twist(rng);
    const Pose g = exp_se3(random_twist(rng, 1.5, 1.0), 1.0);
    // Ad(g) hat(xi) Ad(g)^-1 == hat(Ad(g) xi)
    const Eigen::Matrix4d lhs = g.matrix() * hat6(xi) * g.inverse().matrix();
    const Twist mapped = Twist::from_vec(adjoint(g) * xi.vec());
    CHECK((lhs - hat6(mapped)).norm() < 1e-12);
  }
}
