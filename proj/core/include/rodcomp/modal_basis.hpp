#pragma once

#include <Eigen/Core>
#include <array>

namespace rodcomp {

/// Chebyshev polynomial of the first kind, T_n(x), via the three-term
/// recursion. x may overshoot [-1, 1] by at most 1e-12 (clamped).
double chebyshev_eval(int n, double x);

/// Maps arc length s in [0, L] to the Chebyshev domain: x = (2s - L) / L.
double domain_map(double s, double length);

// Section stiffness of a Kirchhoff rod: diag(EI_x, EI_y, JG).
struct RodProperties {
  double length = 0.0;                                     // m
  Eigen::Vector3d stiffness = Eigen::Vector3d::Zero();     // (EI_x, EI_y, JG), N m^2

  RodProperties() = default;
  RodProperties(double L, const Eigen::Vector3d& k_bt_diag);

  /// Circular cross section: I = pi d^4 / 64, J = 2I, G = E / (2 (1 + nu)).
  static RodProperties circular(double L, double diameter, double youngs_modulus,
                                double poisson_ratio);

  Eigen::Matrix3d k_bt() const { return stiffness.asDiagonal(); }
};

// Chebyshev modal shape basis. Per-axis polynomial order; the torsion
// axis may be absent (order -1) for segments with negligible torsion.
class ShapeBasis {
 public:
  ShapeBasis(int order_x, int order_y, int order_z, double length);

  static ShapeBasis uniform(int order, double length) {
    return ShapeBasis(order, order, order, length);
  }
  static ShapeBasis bending_only(int order, double length) {
    return ShapeBasis(order, order, -1, length);
  }

  int coeff_count() const { return m_; }
  double length() const { return length_; }
  int order(int axis) const { return orders_[axis]; }
  bool axis_active(int axis) const { return orders_[axis] >= 0; }
  int max_order() const;

  /// First coefficient index of the given axis block.
  int block_start(int axis) const;

  /// 3 x m matrix Phi(s) with the per-axis Chebyshev rows in block layout.
  Eigen::MatrixXd evaluate(double s) const;

  /// u(s) = Phi(s) c.
  Eigen::Vector3d curvature(const Eigen::VectorXd& coeffs, double s) const;

 private:
  std::array<int, 3> orders_;
  double length_;
  int m_;
};

/// Energy kernel Phi_k = integral of Phi^T K_bt Phi over [0, L], computed
/// with a Gauss-Legendre rule exact for the polynomial integrand.
Eigen::MatrixXd energy_kernel(const ShapeBasis& basis, const RodProperties& props);

/// Node count used by energy_kernel (recorded in report metadata).
int energy_kernel_node_count(const ShapeBasis& basis);

}  // namespace rodcomp
