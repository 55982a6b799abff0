#pragma once

#include <Eigen/Core>
#include <vector>

#include "rodcomp/modal_basis.hpp"
#include "rodcomp/rod_kinematics.hpp"
#include "rodcomp/se3.hpp"

namespace rodcomp {

// 6x6 task-space compliance in the hybrid frame: moment-first wrench in,
// angular-first twist out. Symmetric when the applied wrench is zero.
struct ComplianceMatrix {
  Matrix6d matrix = Matrix6d::Zero();
  double inner_condition = 0.0;  // condition number of the inverted matrix
};

/// E = 1/2 c^T Phi_k c.
double bending_energy(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                      const RodProperties& props);

/// dE/dc = 1/2 (Phi_k + Phi_k^T) c.
Eigen::VectorXd energy_gradient(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                const RodProperties& props);

/// d2E/dc2 = 1/2 (Phi_k + Phi_k^T); configuration independent, positive definite.
Eigen::MatrixXd energy_hessian(const ShapeBasis& basis, const RodProperties& props);

/// Stacked wrench-Jacobian-derivative term: column i is (dJ~/dc_i)^T w.
Eigen::MatrixXd wrench_jacobian_term(const std::vector<Eigen::MatrixXd>& jac_derivs,
                                     const Wrench& w);

/// Analytic single-rod task-space compliance:
/// C = J~ (d2E/dc2 - [dJ~^T/dc_i w_h]_i)^-1 J~^T.
/// Throws SingularMatrixError when the inner matrix condition exceeds 1e12.
ComplianceMatrix single_rod_compliance(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                       const RodProperties& props, int steps, const Wrench& w_h);

/// Same expression with the Jacobian-derivative term dropped (ablation).
ComplianceMatrix single_rod_compliance_no_jacobian_derivative(const ShapeBasis& basis,
                                                              const Eigen::VectorXd& coeffs,
                                                              const RodProperties& props,
                                                              int steps);

/// A^-1 * rhs with condition-number reporting; throws SingularMatrixError
/// when the condition number exceeds 1e12.
Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& inner, const Eigen::MatrixXd& rhs,
                              double* condition = nullptr);

/// Shared inner solve: C = J~ A^-1 J~^T with condition reporting.
ComplianceMatrix compliance_from_inner(const Eigen::MatrixXd& hybrid_jac,
                                       const Eigen::MatrixXd& inner);

}  // namespace rodcomp
