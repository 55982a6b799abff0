#include "rodcomp/rod_kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace rodcomp {

namespace {

const double kGaussOffset = std::sqrt(3.0) / 6.0;  // Gauss nodes at 1/2 -+ sqrt(3)/6

struct StepSpan {
  double s0;
  double h;
};

std::vector<StepSpan> step_spans(double length, int steps, double s_end) {
  if (steps < 1) throw std::invalid_argument("integrate_pose: steps must be >= 1");
  if (s_end < 0.0) s_end = length;
  if (s_end > length * (1.0 + 1e-12)) {
    throw std::domain_error("integrate_pose: s_end beyond rod length");
  }
  s_end = std::min(s_end, length);

  const double h = length / steps;
  std::vector<StepSpan> spans;
  int full = static_cast<int>(std::floor(s_end / h + 1e-12));
  full = std::min(full, steps);
  spans.reserve(full + 1);
  for (int i = 0; i < full; ++i) spans.push_back({i * h, h});
  const double rem = s_end - full * h;
  if (rem > 1e-12 * length) spans.push_back({full * h, rem});
  return spans;
}

Twist curvature_twist(const ShapeBasis& basis, const Eigen::VectorXd& coeffs, double s) {
  return Twist(basis.curvature(coeffs, s), Eigen::Vector3d::UnitZ());
}

// 4th-order Magnus twist for one step of T' = T hat6(eta):
// Psi = h/2 (eta1 + eta2) + sqrt(3) h^2 / 12 [eta1, eta2].
Twist magnus_step_twist(const ShapeBasis& basis, const Eigen::VectorXd& coeffs, double s0,
                        double h) {
  const Twist eta1 = curvature_twist(basis, coeffs, s0 + h * (0.5 - kGaussOffset));
  const Twist eta2 = curvature_twist(basis, coeffs, s0 + h * (0.5 + kGaussOffset));
  const Vector6d psi = 0.5 * h * (eta1.vec() + eta2.vec()) +
                       (std::sqrt(3.0) * h * h / 12.0) * (ad6(eta1) * eta2.vec());
  return Twist::from_vec(psi);
}

// d Psi / d c for the same step. d eta_j / d c = [Phi(tau_j); 0].
Eigen::MatrixXd magnus_step_derivative(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                       double s0, double h) {
  const int m = basis.coeff_count();
  const double tau1 = s0 + h * (0.5 - kGaussOffset);
  const double tau2 = s0 + h * (0.5 + kGaussOffset);
  const Twist eta1 = curvature_twist(basis, coeffs, tau1);
  const Twist eta2 = curvature_twist(basis, coeffs, tau2);

  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(6, m);
  Eigen::MatrixXd b2 = Eigen::MatrixXd::Zero(6, m);
  b1.topRows<3>() = basis.evaluate(tau1);
  b2.topRows<3>() = basis.evaluate(tau2);

  return 0.5 * h * (b1 + b2) +
         (std::sqrt(3.0) * h * h / 12.0) * (ad6(eta1) * b2 - ad6(eta2) * b1);
}

}  // namespace

BackboneTrajectory integrate_pose(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                  int steps, const Pose& base, double s_end) {
  const auto spans = step_spans(basis.length(), steps, s_end);
  BackboneTrajectory traj;
  traj.arc_lengths.reserve(spans.size() + 1);
  traj.poses.reserve(spans.size() + 1);
  traj.step_twists.reserve(spans.size());
  traj.arc_lengths.push_back(0.0);
  traj.poses.push_back(base);
  Pose pose = base;
  for (const auto& span : spans) {
    const Twist psi = magnus_step_twist(basis, coeffs, span.s0, span.h);
    pose = pose * exp_se3(psi);
    traj.step_twists.push_back(psi);
    traj.arc_lengths.push_back(span.s0 + span.h);
    traj.poses.push_back(pose);
  }
  return traj;
}

BodyJacobian body_jacobian(const ShapeBasis& basis, const Eigen::VectorXd& coeffs, int steps,
                           double s_eval) {
  const int m = basis.coeff_count();
  const auto spans = step_spans(basis.length(), steps, s_eval);

  std::vector<Twist> psis(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    psis[i] = magnus_step_twist(basis, coeffs, spans[i].s0, spans[i].h);
  }

  // J = sum_i Ad(H_i) dexp(-Psi_i) dPsi_i/dc with H_i the inverse of the
  // tail product exp(Psi_{i+1}) ... exp(Psi_k), accumulated backward.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(6, m);
  Pose tail_inverse;  // identity
  for (int i = static_cast<int>(spans.size()) - 1; i >= 0; --i) {
    const Eigen::MatrixXd d_psi = magnus_step_derivative(basis, coeffs, spans[i].s0, spans[i].h);
    jac.noalias() += adjoint(tail_inverse) * (dexp_se3(Twist::from_vec(-psis[i].vec())) * d_psi);
    tail_inverse = tail_inverse * exp_se3(psis[i]).inverse();
  }
  BodyJacobian out;
  out.matrix = std::move(jac);
  out.arc_length = spans.empty() ? 0.0 : spans.back().s0 + spans.back().h;
  return out;
}

Eigen::MatrixXd hybrid_jacobian(const BackboneTrajectory& traj, const BodyJacobian& jac) {
  if (std::abs(jac.arc_length - traj.tip_arc_length()) > 1e-9 * (1.0 + traj.tip_arc_length())) {
    throw std::invalid_argument("hybrid_jacobian: Jacobian not evaluated at the trajectory tip");
  }
  return hybrid_map(traj.tip().rotation) * jac.matrix;
}

TipJacobian tip_hybrid_jacobian(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                int steps) {
  const BackboneTrajectory traj = integrate_pose(basis, coeffs, steps);
  const BodyJacobian jac = body_jacobian(basis, coeffs, steps, basis.length());
  return {hybrid_jacobian(traj, jac), traj.tip()};
}

std::vector<Eigen::MatrixXd> hybrid_jacobian_coeff_derivatives(const ShapeBasis& basis,
                                                               const Eigen::VectorXd& coeffs,
                                                               int steps) {
  const int m = basis.coeff_count();
  std::vector<Eigen::MatrixXd> derivs;
  derivs.reserve(m);
  Eigen::VectorXd c = coeffs;
  for (int i = 0; i < m; ++i) {
    const double h = std::max(1e-6, 1e-6 * std::abs(coeffs(i)));
    c(i) = coeffs(i) + h;
    const Eigen::MatrixXd plus = tip_hybrid_jacobian(basis, c, steps).hybrid;
    c(i) = coeffs(i) - h;
    const Eigen::MatrixXd minus = tip_hybrid_jacobian(basis, c, steps).hybrid;
    c(i) = coeffs(i);
    derivs.push_back((plus - minus) / (2.0 * h));
  }
  return derivs;
}

}  // namespace rodcomp
