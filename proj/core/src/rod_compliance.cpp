#include "rodcomp/rod_compliance.hpp"

#include <Eigen/SVD>

#include "rodcomp/errors.hpp"

namespace rodcomp {

namespace {
constexpr double kConditionLimit = 1e12;
}

double bending_energy(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                      const RodProperties& props) {
  const Eigen::MatrixXd kernel = energy_kernel(basis, props);
  return 0.5 * coeffs.dot(kernel * coeffs);
}

Eigen::VectorXd energy_gradient(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                const RodProperties& props) {
  const Eigen::MatrixXd kernel = energy_kernel(basis, props);
  return 0.5 * (kernel + kernel.transpose()) * coeffs;
}

Eigen::MatrixXd energy_hessian(const ShapeBasis& basis, const RodProperties& props) {
  const Eigen::MatrixXd kernel = energy_kernel(basis, props);
  return 0.5 * (kernel + kernel.transpose());
}

Eigen::MatrixXd wrench_jacobian_term(const std::vector<Eigen::MatrixXd>& jac_derivs,
                                     const Wrench& w) {
  const int m = static_cast<int>(jac_derivs.size());
  Eigen::MatrixXd term = Eigen::MatrixXd::Zero(m, m);
  const Vector6d wv = w.vec();
  for (int i = 0; i < m; ++i) {
    term.col(i) = jac_derivs[i].transpose() * wv;
  }
  return term;
}

Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& inner, const Eigen::MatrixXd& rhs,
                              double* condition) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(inner, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond < kConditionLimit)) {
    throw SingularMatrixError("compliance inner matrix is singular or near-singular", cond);
  }
  if (condition) *condition = cond;
  return svd.solve(rhs);
}

ComplianceMatrix compliance_from_inner(const Eigen::MatrixXd& hybrid_jac,
                                       const Eigen::MatrixXd& inner) {
  ComplianceMatrix out;
  out.matrix = hybrid_jac * solve_checked(inner, hybrid_jac.transpose(), &out.inner_condition);
  return out;
}

ComplianceMatrix single_rod_compliance(const ShapeBasis& basis, const Eigen::VectorXd& coeffs,
                                       const RodProperties& props, int steps, const Wrench& w_h) {
  const Eigen::MatrixXd hessian = energy_hessian(basis, props);
  const Eigen::MatrixXd hybrid = tip_hybrid_jacobian(basis, coeffs, steps).hybrid;
  Eigen::MatrixXd inner = hessian;
  if (w_h.vec().squaredNorm() > 0.0) {
    const auto jac_derivs = hybrid_jacobian_coeff_derivatives(basis, coeffs, steps);
    inner -= wrench_jacobian_term(jac_derivs, w_h);
  }
  return compliance_from_inner(hybrid, inner);
}

ComplianceMatrix single_rod_compliance_no_jacobian_derivative(const ShapeBasis& basis,
                                                              const Eigen::VectorXd& coeffs,
                                                              const RodProperties& props,
                                                              int steps) {
  const Eigen::MatrixXd hessian = energy_hessian(basis, props);
  const Eigen::MatrixXd hybrid = tip_hybrid_jacobian(basis, coeffs, steps).hybrid;
  return compliance_from_inner(hybrid, hessian);
}

}  // namespace rodcomp
