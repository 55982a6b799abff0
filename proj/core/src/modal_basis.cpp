#include "rodcomp/modal_basis.hpp"

#include <cmath>
#include <stdexcept>

#include "rodcomp/quadrature.hpp"

namespace rodcomp {

namespace {
constexpr double kDomainClamp = 1e-12;
}

double chebyshev_eval(int n, double x) {
  if (n < 0) throw std::invalid_argument("chebyshev_eval: negative order");
  if (std::abs(x) > 1.0 + kDomainClamp) {
    throw std::domain_error("chebyshev_eval: x outside [-1, 1]: " + std::to_string(x));
  }
  x = std::clamp(x, -1.0, 1.0);
  if (n == 0) return 1.0;
  if (n == 1) return x;
  double t0 = 1.0, t1 = x;
  for (int k = 2; k <= n; ++k) {
    const double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

double domain_map(double s, double length) {
  if (length <= 0.0) throw std::invalid_argument("domain_map: length must be positive");
  if (s < -kDomainClamp * length || s > length * (1.0 + kDomainClamp)) {
    throw std::domain_error("domain_map: s outside [0, L]: s=" + std::to_string(s));
  }
  return std::clamp((2.0 * s - length) / length, -1.0, 1.0);
}

RodProperties::RodProperties(double L, const Eigen::Vector3d& k_bt_diag)
    : length(L), stiffness(k_bt_diag) {
  if (L <= 0.0) throw std::invalid_argument("RodProperties: length must be positive");
  if ((stiffness.array() <= 0.0).any()) {
    throw std::invalid_argument("RodProperties: K_bt diagonal must be strictly positive");
  }
}

RodProperties RodProperties::circular(double L, double diameter, double youngs_modulus,
                                      double poisson_ratio) {
  const double inertia = M_PI * std::pow(diameter, 4) / 64.0;
  const double shear_modulus = youngs_modulus / (2.0 * (1.0 + poisson_ratio));
  const double ei = youngs_modulus * inertia;
  const double gj = shear_modulus * 2.0 * inertia;
  return RodProperties(L, Eigen::Vector3d(ei, ei, gj));
}

ShapeBasis::ShapeBasis(int order_x, int order_y, int order_z, double length)
    : orders_{order_x, order_y, order_z}, length_(length) {
  if (length <= 0.0) throw std::invalid_argument("ShapeBasis: length must be positive");
  if (order_x < 0 || order_y < 0) {
    throw std::invalid_argument("ShapeBasis: bending axes must have order >= 0");
  }
  m_ = 0;
  for (int axis = 0; axis < 3; ++axis) {
    if (orders_[axis] >= 0) m_ += orders_[axis] + 1;
  }
}

int ShapeBasis::max_order() const {
  int n = 0;
  for (int axis = 0; axis < 3; ++axis) n = std::max(n, orders_[axis]);
  return n;
}

int ShapeBasis::block_start(int axis) const {
  int start = 0;
  for (int a = 0; a < axis; ++a) {
    if (orders_[a] >= 0) start += orders_[a] + 1;
  }
  return start;
}

Eigen::MatrixXd ShapeBasis::evaluate(double s) const {
  const double x = domain_map(s, length_);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(3, m_);
  int col = 0;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = orders_[axis];
    if (n < 0) continue;
    // fill T_0 .. T_n by recursion
    double t0 = 1.0, t1 = x;
    for (int k = 0; k <= n; ++k) {
      double value;
      if (k == 0) {
        value = 1.0;
      } else if (k == 1) {
        value = x;
      } else {
        value = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = value;
      }
      phi(axis, col++) = value;
    }
  }
  return phi;
}

Eigen::Vector3d ShapeBasis::curvature(const Eigen::VectorXd& coeffs, double s) const {
  if (coeffs.size() != m_) {
    throw std::invalid_argument("ShapeBasis::curvature: coefficient vector has size " +
                                std::to_string(coeffs.size()) + ", expected " +
                                std::to_string(m_));
  }
  return evaluate(s) * coeffs;
}

int energy_kernel_node_count(const ShapeBasis& basis) {
  // Integrand degree is 2 * max_order; this is exact with room to spare.
  return (2 * basis.max_order() + 1) / 2 + 2;
}

Eigen::MatrixXd energy_kernel(const ShapeBasis& basis, const RodProperties& props) {
  const int m = basis.coeff_count();
  const int nodes = energy_kernel_node_count(basis);
  const auto& rule = gauss_legendre(nodes);
  const double half = 0.5 * props.length;
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(m, m);
  const Eigen::Matrix3d k_bt = props.k_bt();
  for (int i = 0; i < nodes; ++i) {
    const double s = half * (1.0 + rule.nodes[i]);
    const Eigen::MatrixXd phi = basis.evaluate(s);
    kernel.noalias() += (half * rule.weights[i]) * phi.transpose() * k_bt * phi;
  }
  return kernel;
}

}  // namespace rodcomp
