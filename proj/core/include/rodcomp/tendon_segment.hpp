#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "rodcomp/modal_basis.hpp"
#include "rodcomp/rod_compliance.hpp"
#include "rodcomp/se3.hpp"

namespace rodcomp {

// Tendon path in the moving cross-section frame: radial position r(s)
// (zero z-component) and its arc-length derivative, anchored at anchor_s.
struct TendonPath {
  std::function<Eigen::Vector2d(double)> radial;
  std::function<Eigen::Vector2d(double)> radial_deriv;
  double anchor_s = 0.0;
};

struct TendonRouting {
  std::vector<TendonPath> tendons;

  int count() const { return static_cast<int>(tendons.size()); }

  /// Constant-pitch-radius placement: tendon i at angle
  /// first_angle + i * 2 pi / count, radius fixed, anchored at anchor_s.
  static TendonRouting constant_pitch(int count, double radius, double anchor_s,
                                      double first_angle = 0.0);

  /// Piecewise-linear tabulated path (general routing fallback).
  static TendonPath tabulated(std::vector<double> s, std::vector<Eigen::Vector2d> r,
                              double anchor_s);
};

// Sign convention for the tendon terms inside the inverted matrix of the
// segment compliance expressions. kSubtractive subtracts C_tau and
// J_lc^T K_l J_lc; kPhysical adds them, which is the energy Hessian of
// the elastic system and the convention the oracle-differencing
// acceptance test selects. Default: kPhysical.
enum class TendonTermMode { kPhysical, kSubtractive };

inline constexpr TendonTermMode kDefaultTendonTermMode = TendonTermMode::kPhysical;

const char* to_string(TendonTermMode mode);

// Tendon-actuated continuum segment: rod, basis, routing and the diagonal
// joint-level stiffness of the actuation lines.
struct SegmentModel {
  RodProperties props;
  ShapeBasis basis;
  TendonRouting routing;
  Eigen::VectorXd line_stiffness;  // K_l diagonal, N/m
  int integration_steps = 10;
  int quadrature_nodes = 32;

  SegmentModel(RodProperties props_, ShapeBasis basis_, TendonRouting routing_,
               Eigen::VectorXd line_stiffness_, int integration_steps_ = 10,
               int quadrature_nodes_ = 32);

  int tendon_count() const { return routing.count(); }
  Eigen::MatrixXd k_line() const { return line_stiffness.asDiagonal(); }
};

// Actuator state: released line lengths l0, so tensions follow
// tau(c) = K_l (l(c) - l0).
struct ActuationState {
  Eigen::VectorXd released_lengths;
};

/// Moving-frame tendon path derivative:
/// w' = e3 - hat(r) Phi(s) c + r'(s).
Eigen::Vector3d tendon_path_derivative(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                       int tendon_index, double s);

/// Tendon length by fixed-node Gauss-Legendre quadrature of |w'|.
double tendon_length(const SegmentModel& model, const Eigen::VectorXd& coeffs, int tendon_index);

Eigen::VectorXd tendon_lengths(const SegmentModel& model, const Eigen::VectorXd& coeffs);

/// Configuration-space Jacobian J_lc (p x m), analytic: row i is
/// integral of (w'^T / |w'|) (-hat(r) Phi) ds.
Eigen::MatrixXd config_jacobian(const SegmentModel& model, const Eigen::VectorXd& coeffs);

/// C_tau: column i is (d J_lc^T / d c_i) tau, derivative by central FD.
Eigen::MatrixXd c_tau(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                      const Eigen::VectorXd& tensions);

/// C_wh: column i is (d J~^T / d c_i) w_h.
Eigen::MatrixXd c_wh(const SegmentModel& model, const Eigen::VectorXd& coeffs, const Wrench& w_h);

/// Statics residual of the segment; zero at equilibrium.
/// kPhysical: dE/dc + J_lc^T tau - J~^T w_h; kSubtractive flips the tendon term.
Eigen::VectorXd segment_statics_residual(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                         const Eigen::VectorXd& tensions, const Wrench& w_h,
                                         TendonTermMode mode = kDefaultTendonTermMode);

/// Task-space compliance of the segment:
/// C_x = J~ (d2E/dc2 - C_wh +- C_tau +- J_lc^T K_l J_lc)^-1 J~^T.
ComplianceMatrix task_space_compliance(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                       const Eigen::VectorXd& tensions, const Wrench& w_h,
                                       TendonTermMode mode = kDefaultTendonTermMode);

// m x m configuration-space compliance; independent of the external wrench.
struct ConfigCompliance {
  Eigen::MatrixXd matrix;
  double inner_condition = 0.0;
};

ConfigCompliance config_space_compliance(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                         const Eigen::VectorXd& tensions,
                                         TendonTermMode mode = kDefaultTendonTermMode);

/// External wrench projected into configuration space: w_c = J~^T w_h.
Eigen::VectorXd projected_wrench(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                 const Wrench& w_h);

/// Line tensions at configuration c for a given actuator state.
Eigen::VectorXd line_tensions(const SegmentModel& model, const ActuationState& actuation,
                              const Eigen::VectorXd& coeffs);

/// Actuator state that produces the given pull-in displacements measured
/// from the straight configuration.
ActuationState actuation_from_pulls(const SegmentModel& model, const Eigen::VectorXd& pulls);

}  // namespace rodcomp
