#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "rodcomp/modal_basis.hpp"
#include "rodcomp/se3.hpp"
#include "rodcomp/tendon_segment.hpp"

namespace rodcomp {

// Dense equilibrium of the classical Kirchhoff rod equations, solved by
// shooting on the base reactions. Internal force/moment are world-frame.
struct RodBvpSolution {
  std::vector<double> arc_lengths;
  std::vector<Pose> poses;
  std::vector<Eigen::Vector3d> internal_moments;
  std::vector<Eigen::Vector3d> internal_forces;
  double residual_norm = 0.0;
  int iterations = 0;

  const Pose& tip() const { return poses.back(); }
  Vector6d base_reactions() const {
    Vector6d x;
    x << internal_moments.front(), internal_forces.front();
    return x;
  }
};

struct RodBvpOptions {
  int integration_steps = 200;
  double tolerance = 1e-10;
  int max_iterations = 100;
  int max_damping_halvings = 20;
  // Load fractions solved in sequence, each seeding the next.
  std::vector<double> continuation = {0.25, 0.5, 0.75, 1.0};
  std::optional<Vector6d> initial_reactions;  // warm start (m0; n0)
};

/// Shooting solve of n' = 0, m' = -(R e3) x n, u = K_bt^-1 R^T m with
/// clamped base and tip conditions n(L) = f_tip, m(L) = m_tip.
/// Throws ConvergenceError when the damped Newton iteration fails.
RodBvpSolution solve_rod_bvp(const RodProperties& props, const Wrench& w_tip,
                             const Pose& base = Pose(), const RodBvpOptions& options = {});

/// Body-frame curvature K_bt^-1 R^T m at sample index i.
Eigen::Vector3d bvp_curvature(const RodBvpSolution& solution, const RodProperties& props,
                              std::size_t index);

// Modal equilibrium found by damped Newton on the statics residual.
struct ModalEquilibrium {
  Eigen::VectorXd coeffs;
  double residual_norm = 0.0;
  int iterations = 0;
};

struct ModalSolveOptions {
  double tolerance = 1e-9;
  int max_iterations = 100;
  int max_damping_halvings = 20;
  int integration_steps = 10;
  std::vector<double> continuation = {0.25, 0.5, 0.75, 1.0};
};

/// Single rod: Newton on  dE/dc - J~^T w_h = 0  with Hessian d2E/dc2 - C_wh.
ModalEquilibrium solve_modal_equilibrium(const ShapeBasis& basis, const RodProperties& props,
                                         const Wrench& w_h, const Eigen::VectorXd& c_init,
                                         const ModalSolveOptions& options = {});

/// Segment with fixed line tensions.
ModalEquilibrium solve_modal_equilibrium(const SegmentModel& model,
                                         const Eigen::VectorXd& tensions, const Wrench& w_h,
                                         const Eigen::VectorXd& c_init,
                                         const ModalSolveOptions& options = {},
                                         TendonTermMode mode = kDefaultTendonTermMode);

/// Segment with position-held actuators: tensions follow
/// tau(c) = K_l (l(c) - l0) through the solve.
ModalEquilibrium solve_segment_equilibrium(const SegmentModel& model,
                                           const ActuationState& actuation, const Wrench& w_h,
                                           const Eigen::VectorXd& c_init,
                                           const ModalSolveOptions& options = {},
                                           TendonTermMode mode = kDefaultTendonTermMode);

/// Equilibrium tip pose under a given applied wrench; adapter the
/// finite-difference extraction differencing runs through.
using WrenchSolve = std::function<Pose(const Wrench&)>;

/// One-sided finite-difference compliance: column j is the hybrid-frame
/// tip deflection under +step on wrench axis j, divided by the step.
Matrix6d finite_difference_compliance(const WrenchSolve& resolve, const Wrench& at,
                                      double force_step = 0.1, double moment_step = 0.05);

struct CurvatureSample {
  double s;
  Eigen::Vector3d u;
};

/// Least-squares fit of modal coefficients to curvature samples. Exact for
/// polynomial samples of degree <= basis order at distinct nodes. Throws
/// on a rank-deficient sample matrix.
Eigen::VectorXd fit_modal_coefficients(const std::vector<CurvatureSample>& samples,
                                       const ShapeBasis& basis);

/// Samples the BVP solution curvature for modal fitting.
std::vector<CurvatureSample> bvp_curvature_samples(const RodBvpSolution& solution,
                                                   const RodProperties& props);

}  // namespace rodcomp
