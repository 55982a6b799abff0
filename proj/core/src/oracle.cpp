#include "rodcomp/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>

#include "rodcomp/errors.hpp"
#include "rodcomp/rod_compliance.hpp"
#include "rodcomp/rod_kinematics.hpp"

namespace rodcomp {

namespace {

// Integration state of the Kirchhoff equilibrium ODE; the internal force
// n is constant (no distributed load) and rides along as a parameter.
struct RodState {
  Eigen::Matrix3d R;
  Eigen::Vector3d p;
  Eigen::Vector3d m;
};

RodState operator+(const RodState& a, const RodState& b) {
  return {a.R + b.R, a.p + b.p, a.m + b.m};
}
RodState operator*(double k, const RodState& a) { return {k * a.R, k * a.p, k * a.m}; }

RodState rod_rhs(const RodState& y, const Eigen::Vector3d& n, const Eigen::Matrix3d& k_inv) {
  const Eigen::Vector3d tangent = y.R.col(2);
  const Eigen::Vector3d u = k_inv * (y.R.transpose() * y.m);
  return {y.R * hat3(u), tangent, -tangent.cross(n)};
}

void orthonormalize(Eigen::Matrix3d& R) {
  Eigen::Vector3d c0 = R.col(0).normalized();
  Eigen::Vector3d c1 = (R.col(1) - c0 * c0.dot(R.col(1))).normalized();
  R.col(0) = c0;
  R.col(1) = c1;
  R.col(2) = c0.cross(c1);
}

RodBvpSolution integrate_rod(const RodProperties& props, const Pose& base,
                             const Eigen::Vector3d& m0, const Eigen::Vector3d& n0, int steps) {
  const Eigen::Matrix3d k_inv = props.stiffness.cwiseInverse().asDiagonal();
  const double h = props.length / steps;
  RodBvpSolution sol;
  sol.arc_lengths.reserve(steps + 1);
  sol.poses.reserve(steps + 1);
  sol.internal_moments.reserve(steps + 1);
  sol.internal_forces.reserve(steps + 1);

  RodState y{base.rotation, base.position, m0};
  sol.arc_lengths.push_back(0.0);
  sol.poses.push_back(base);
  sol.internal_moments.push_back(m0);
  sol.internal_forces.push_back(n0);

  for (int i = 0; i < steps; ++i) {
    const RodState k1 = rod_rhs(y, n0, k_inv);
    const RodState k2 = rod_rhs(y + (0.5 * h) * k1, n0, k_inv);
    const RodState k3 = rod_rhs(y + (0.5 * h) * k2, n0, k_inv);
    const RodState k4 = rod_rhs(y + h * k3, n0, k_inv);
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    orthonormalize(y.R);
    sol.arc_lengths.push_back((i + 1) * h);
    sol.poses.push_back(Pose(y.R, y.p));
    sol.internal_moments.push_back(y.m);
    sol.internal_forces.push_back(n0);
  }
  return sol;
}

Vector6d shooting_residual(const RodBvpSolution& sol, const Wrench& w_tip) {
  Vector6d f;
  f << sol.internal_moments.back() - w_tip.moment, sol.internal_forces.back() - w_tip.force;
  return f;
}

}  // namespace

RodBvpSolution solve_rod_bvp(const RodProperties& props, const Wrench& w_tip, const Pose& base,
                             const RodBvpOptions& options) {
  std::vector<double> history;
  int total_iterations = 0;

  Vector6d x;
  bool have_guess = false;
  if (options.initial_reactions) {
    x = *options.initial_reactions;
    have_guess = true;
  }

  RodBvpSolution solution;
  std::vector<double> fractions = options.continuation;
  if (fractions.empty() || fractions.back() != 1.0) fractions.push_back(1.0);

  for (double fraction : fractions) {
    const Wrench target(fraction * w_tip.moment, fraction * w_tip.force);
    if (!have_guess) {
      // Straight-rod estimate: m(L) - m(0) = -(p(L) - p(0)) x n.
      x.head<3>() = target.moment +
                    (props.length * Eigen::Vector3d::UnitZ()).cross(target.force);
      x.tail<3>() = target.force;
      have_guess = true;
    }

    auto shoot = [&](const Vector6d& reactions) {
      return integrate_rod(props, base, reactions.head<3>(), reactions.tail<3>(),
                           options.integration_steps);
    };

    solution = shoot(x);
    Vector6d residual = shooting_residual(solution, target);
    double res_norm = residual.norm();
    history.push_back(res_norm);

    while (res_norm >= options.tolerance) {
      if (++total_iterations > options.max_iterations) {
        throw ConvergenceError("solve_rod_bvp: no convergence after max iterations (residual " +
                                   std::to_string(res_norm) + ")",
                               x, history);
      }
      Matrix6d jac;
      for (int j = 0; j < 6; ++j) {
        const double step = 1e-7 * std::max(1.0, std::abs(x(j)));
        Vector6d xp = x;
        xp(j) += step;
        jac.col(j) = (shooting_residual(shoot(xp), target) - residual) / step;
      }
      const Vector6d delta = jac.fullPivLu().solve(-residual);

      double lambda = 1.0;
      bool improved = false;
      for (int halving = 0; halving <= options.max_damping_halvings; ++halving) {
        const Vector6d candidate = x + lambda * delta;
        RodBvpSolution trial = shoot(candidate);
        const Vector6d trial_residual = shooting_residual(trial, target);
        if (trial_residual.norm() < res_norm) {
          x = candidate;
          solution = std::move(trial);
          residual = trial_residual;
          res_norm = residual.norm();
          history.push_back(res_norm);
          improved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!improved) {
        throw ConvergenceError(
            "solve_rod_bvp: damped Newton stalled (residual " + std::to_string(res_norm) + ")", x,
            history);
      }
    }
  }

  solution.residual_norm = history.empty() ? 0.0 : history.back();
  solution.iterations = total_iterations;
  return solution;
}

Eigen::Vector3d bvp_curvature(const RodBvpSolution& solution, const RodProperties& props,
                              std::size_t index) {
  const Eigen::Matrix3d k_inv = props.stiffness.cwiseInverse().asDiagonal();
  return k_inv * (solution.poses[index].rotation.transpose() * solution.internal_moments[index]);
}

std::vector<CurvatureSample> bvp_curvature_samples(const RodBvpSolution& solution,
                                                   const RodProperties& props) {
  std::vector<CurvatureSample> samples;
  samples.reserve(solution.arc_lengths.size());
  for (std::size_t i = 0; i < solution.arc_lengths.size(); ++i) {
    samples.push_back({solution.arc_lengths[i], bvp_curvature(solution, props, i)});
  }
  return samples;
}

namespace {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

ModalEquilibrium newton_solve(const Eigen::VectorXd& c_init, const ResidualFn& residual_fn,
                              const JacobianFn& jacobian_fn, const ModalSolveOptions& options,
                              int* iteration_budget) {
  Eigen::VectorXd c = c_init;
  std::vector<double> history;
  Eigen::VectorXd residual = residual_fn(c);
  double res_norm = residual.norm();
  history.push_back(res_norm);

  while (res_norm >= options.tolerance) {
    if (--(*iteration_budget) < 0) {
      throw ConvergenceError("solve_modal_equilibrium: max iterations exceeded (residual " +
                                 std::to_string(res_norm) + ")",
                             c, history);
    }
    const Eigen::MatrixXd jac = jacobian_fn(c);
    const Eigen::VectorXd delta = jac.fullPivLu().solve(-residual);

    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving <= options.max_damping_halvings; ++halving) {
      const Eigen::VectorXd candidate = c + lambda * delta;
      const Eigen::VectorXd trial = residual_fn(candidate);
      if (trial.norm() < res_norm) {
        c = candidate;
        residual = trial;
        res_norm = residual.norm();
        history.push_back(res_norm);
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) {
      throw ConvergenceError("solve_modal_equilibrium: damped Newton stalled (residual " +
                                 std::to_string(res_norm) + ")",
                             c, history);
    }
  }

  ModalEquilibrium out;
  out.coeffs = c;
  out.residual_norm = res_norm;
  out.iterations = static_cast<int>(history.size()) - 1;
  return out;
}

ModalEquilibrium continuation_solve(
    const Eigen::VectorXd& c_init, const ModalSolveOptions& options,
    const std::function<ResidualFn(const Wrench&)>& residual_for,
    const std::function<JacobianFn(const Wrench&)>& jacobian_for, const Wrench& w_h) {
  std::vector<double> fractions = options.continuation;
  if (fractions.empty() || fractions.back() != 1.0) fractions.push_back(1.0);
  // No load, no need to walk fractions.
  if (w_h.vec().norm() == 0.0) fractions = {1.0};

  int budget = options.max_iterations;
  Eigen::VectorXd c = c_init;
  ModalEquilibrium solution;
  int total = 0;
  for (double fraction : fractions) {
    const Wrench target(fraction * w_h.moment, fraction * w_h.force);
    solution = newton_solve(c, residual_for(target), jacobian_for(target), options, &budget);
    c = solution.coeffs;
    total += solution.iterations;
  }
  solution.iterations = total;
  return solution;
}

}  // namespace

ModalEquilibrium solve_modal_equilibrium(const ShapeBasis& basis, const RodProperties& props,
                                         const Wrench& w_h, const Eigen::VectorXd& c_init,
                                         const ModalSolveOptions& options) {
  const Eigen::MatrixXd hessian = energy_hessian(basis, props);
  auto residual_for = [&](const Wrench& w) {
    return ResidualFn([&, w](const Eigen::VectorXd& c) -> Eigen::VectorXd {
      const Eigen::MatrixXd hybrid = tip_hybrid_jacobian(basis, c, options.integration_steps).hybrid;
      return hessian * c - hybrid.transpose() * w.vec();
    });
  };
  auto jacobian_for = [&](const Wrench& w) {
    return JacobianFn([&, w](const Eigen::VectorXd& c) -> Eigen::MatrixXd {
      const auto derivs = hybrid_jacobian_coeff_derivatives(basis, c, options.integration_steps);
      return hessian - wrench_jacobian_term(derivs, w);
    });
  };
  return continuation_solve(c_init, options, residual_for, jacobian_for, w_h);
}

ModalEquilibrium solve_modal_equilibrium(const SegmentModel& model,
                                         const Eigen::VectorXd& tensions, const Wrench& w_h,
                                         const Eigen::VectorXd& c_init,
                                         const ModalSolveOptions& options, TendonTermMode mode) {
  const double sign = (mode == TendonTermMode::kPhysical) ? 1.0 : -1.0;
  const Eigen::MatrixXd hessian = energy_hessian(model.basis, model.props);
  auto residual_for = [&, sign](const Wrench& w) {
    return ResidualFn([&, sign, w](const Eigen::VectorXd& c) -> Eigen::VectorXd {
      return segment_statics_residual(model, c, tensions, w, mode);
    });
  };
  auto jacobian_for = [&, sign](const Wrench& w) {
    return JacobianFn([&, sign, w](const Eigen::VectorXd& c) -> Eigen::MatrixXd {
      Eigen::MatrixXd jac = hessian + sign * c_tau(model, c, tensions) - c_wh(model, c, w);
      return jac;
    });
  };
  return continuation_solve(c_init, options, residual_for, jacobian_for, w_h);
}

ModalEquilibrium solve_segment_equilibrium(const SegmentModel& model,
                                           const ActuationState& actuation, const Wrench& w_h,
                                           const Eigen::VectorXd& c_init,
                                           const ModalSolveOptions& options, TendonTermMode mode) {
  const double sign = (mode == TendonTermMode::kPhysical) ? 1.0 : -1.0;
  const Eigen::MatrixXd hessian = energy_hessian(model.basis, model.props);
  auto residual_for = [&, sign](const Wrench& w) {
    return ResidualFn([&, sign, w](const Eigen::VectorXd& c) -> Eigen::VectorXd {
      const Eigen::VectorXd tau = line_tensions(model, actuation, c);
      return segment_statics_residual(model, c, tau, w, mode);
    });
  };
  auto jacobian_for = [&, sign](const Wrench& w) {
    return JacobianFn([&, sign, w](const Eigen::VectorXd& c) -> Eigen::MatrixXd {
      const Eigen::VectorXd tau = line_tensions(model, actuation, c);
      const Eigen::MatrixXd j_lc = config_jacobian(model, c);
      return hessian + sign * (c_tau(model, c, tau) + j_lc.transpose() * model.k_line() * j_lc) -
             c_wh(model, c, w);
    });
  };
  return continuation_solve(c_init, options, residual_for, jacobian_for, w_h);
}

Matrix6d finite_difference_compliance(const WrenchSolve& resolve, const Wrench& at,
                                      double force_step, double moment_step) {
  const Pose base = resolve(at);
  Matrix6d compliance;
  for (int axis = 0; axis < 6; ++axis) {
    const double step = axis < 3 ? moment_step : force_step;
    Vector6d w = at.vec();
    w(axis) += step;
    const Pose deflected = resolve(Wrench::from_vec(w));
    Vector6d column;
    column.head<3>() = log_so3(deflected.rotation * base.rotation.transpose());
    column.tail<3>() = deflected.position - base.position;
    compliance.col(axis) = column / step;
  }
  return compliance;
}

Eigen::VectorXd fit_modal_coefficients(const std::vector<CurvatureSample>& samples,
                                       const ShapeBasis& basis) {
  const int m = basis.coeff_count();
  if (static_cast<int>(samples.size()) * 3 < m) {
    throw std::invalid_argument("fit_modal_coefficients: not enough samples");
  }
  Eigen::MatrixXd a(3 * samples.size(), m);
  Eigen::VectorXd b(3 * samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    a.middleRows<3>(3 * i) = basis.evaluate(samples[i].s);
    b.segment<3>(3 * i) = samples[i].u;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < m) {
    throw std::invalid_argument("fit_modal_coefficients: rank-deficient sample matrix");
  }
  return qr.solve(b);
}

}  // namespace rodcomp
