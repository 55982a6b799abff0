#pragma once

#include <Eigen/Core>
#include <vector>

#include "rodcomp/modal_basis.hpp"
#include "rodcomp/se3.hpp"

namespace rodcomp {

// Backbone poses from the product-of-exponentials integration. Sample i
// sits at arc_lengths[i]; poses[0] is the supplied base frame.
struct BackboneTrajectory {
  std::vector<double> arc_lengths;
  std::vector<Pose> poses;
  std::vector<Twist> step_twists;

  int step_count() const { return static_cast<int>(step_twists.size()); }
  const Pose& tip() const { return poses.back(); }
  double tip_arc_length() const { return arc_lengths.back(); }
};

// Body Jacobian J_xi_c: maps modal-coefficient rates to the body twist at
// the evaluation arc length. Rows are angular-first.
struct BodyJacobian {
  Eigen::MatrixXd matrix;  // 6 x m
  double arc_length = 0.0;
};

/// Integrates T' = T hat6(eta) over the modal curvature field with
/// 4th-order Magnus steps (two Gauss nodes plus one commutator per step).
/// s_end < 0 integrates the full length; interior values reuse full steps
/// plus one fractional final step.
BackboneTrajectory integrate_pose(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                  int steps, const Pose& base = Pose(), double s_end = -1.0);

/// Analytic body Jacobian at s_eval, built from dexp maps and adjoint
/// transport through the exponential factors.
BodyJacobian body_jacobian(const ShapeBasis& basis, const Eigen::VectorXd& coeffs, int steps,
                           double s_eval);

/// Hybrid-frame Jacobian J~ = hybrid_map(R_tip) * J. The Jacobian must be
/// evaluated at the trajectory tip.
Eigen::MatrixXd hybrid_jacobian(const BackboneTrajectory& traj, const BodyJacobian& jac);

/// Tip hybrid Jacobian and tip pose in one call.
struct TipJacobian {
  Eigen::MatrixXd hybrid;  // 6 x m
  Pose tip_pose;
};
TipJacobian tip_hybrid_jacobian(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                int steps);

/// d J~ / d c_i at the tip, by relative-scaled central finite differences
/// with h_i = max(1e-6, 1e-6 |c_i|). One 6 x m matrix per coefficient.
std::vector<Eigen::MatrixXd> hybrid_jacobian_coeff_derivatives(const ShapeBasis& basis,
                                                               const Eigen::VectorXd& coeffs,
                                                               int steps);

}  // namespace rodcomp
