#include "rodcomp/tendon_segment.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

#include "rodcomp/quadrature.hpp"

namespace rodcomp {

namespace {

Eigen::Vector3d lift(const Eigen::Vector2d& v) { return Eigen::Vector3d(v.x(), v.y(), 0.0); }

void check_tendon_index(const SegmentModel& model, int tendon_index) {
  if (tendon_index < 0 || tendon_index >= model.tendon_count()) {
    throw std::out_of_range("tendon index out of range");
  }
}

void check_coeffs(const SegmentModel& model, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != model.basis.coeff_count()) {
    throw std::invalid_argument("coefficient vector size does not match basis");
  }
}

}  // namespace

const char* to_string(TendonTermMode mode) {
  return mode == TendonTermMode::kPhysical ? "physical" : "subtractive";
}

TendonRouting TendonRouting::constant_pitch(int count, double radius, double anchor_s,
                                            double first_angle) {
  if (count < 1) throw std::invalid_argument("constant_pitch: need at least one tendon");
  if (radius <= 0.0) throw std::invalid_argument("constant_pitch: radius must be positive");
  TendonRouting routing;
  routing.tendons.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double angle = first_angle + 2.0 * M_PI * i / count;
    const Eigen::Vector2d r(radius * std::cos(angle), radius * std::sin(angle));
    routing.tendons.push_back(TendonPath{
        [r](double) { return r; },
        [](double) { return Eigen::Vector2d::Zero(); },
        anchor_s,
    });
  }
  return routing;
}

TendonPath TendonRouting::tabulated(std::vector<double> s, std::vector<Eigen::Vector2d> r,
                                    double anchor_s) {
  if (s.size() != r.size() || s.size() < 2) {
    throw std::invalid_argument("tabulated: need matching sample vectors of size >= 2");
  }
  auto locate = [s](double query) {
    std::size_t hi = 1;
    while (hi + 1 < s.size() && s[hi] < query) ++hi;
    return hi;
  };
  auto interp = [s, r, locate](double query) {
    const std::size_t hi = locate(query);
    const double t = (query - s[hi - 1]) / (s[hi] - s[hi - 1]);
    return (1.0 - t) * r[hi - 1] + t * r[hi];
  };
  auto deriv = [s, r, locate](double query) {
    const std::size_t hi = locate(query);
    return Eigen::Vector2d((r[hi] - r[hi - 1]) / (s[hi] - s[hi - 1]));
  };
  return TendonPath{interp, deriv, anchor_s};
}

SegmentModel::SegmentModel(RodProperties props_, ShapeBasis basis_, TendonRouting routing_,
                           Eigen::VectorXd line_stiffness_, int integration_steps_,
                           int quadrature_nodes_)
    : props(std::move(props_)),
      basis(std::move(basis_)),
      routing(std::move(routing_)),
      line_stiffness(std::move(line_stiffness_)),
      integration_steps(integration_steps_),
      quadrature_nodes(quadrature_nodes_) {
  if (line_stiffness.size() != routing.count()) {
    throw std::invalid_argument("SegmentModel: K_l size must match tendon count");
  }
  if ((line_stiffness.array() <= 0.0).any()) {
    throw std::invalid_argument("SegmentModel: K_l entries must be positive");
  }
  for (const auto& tendon : routing.tendons) {
    if (tendon.anchor_s <= 0.0 || tendon.anchor_s > props.length * (1.0 + 1e-12)) {
      throw std::invalid_argument("SegmentModel: tendon anchor outside (0, L]");
    }
  }
  if (integration_steps < 1) throw std::invalid_argument("SegmentModel: steps must be >= 1");
  if (quadrature_nodes < 2) throw std::invalid_argument("SegmentModel: quadrature nodes < 2");
}

Eigen::Vector3d tendon_path_derivative(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                       int tendon_index, double s) {
  check_tendon_index(model, tendon_index);
  check_coeffs(model, coeffs);
  const auto& tendon = model.routing.tendons[tendon_index];
  const Eigen::Vector3d r = lift(tendon.radial(s));
  const Eigen::Vector3d r_prime = lift(tendon.radial_deriv(s));
  return Eigen::Vector3d::UnitZ() - r.cross(model.basis.curvature(coeffs, s)) + r_prime;
}

double tendon_length(const SegmentModel& model, const Eigen::VectorXd& coeffs, int tendon_index) {
  check_tendon_index(model, tendon_index);
  const auto& tendon = model.routing.tendons[tendon_index];
  const auto& rule = gauss_legendre(model.quadrature_nodes);
  const double half = 0.5 * tendon.anchor_s;
  double length = 0.0;
  for (int q = 0; q < model.quadrature_nodes; ++q) {
    const double s = half * (1.0 + rule.nodes[q]);
    length += half * rule.weights[q] * tendon_path_derivative(model, coeffs, tendon_index, s).norm();
  }
  return length;
}

Eigen::VectorXd tendon_lengths(const SegmentModel& model, const Eigen::VectorXd& coeffs) {
  Eigen::VectorXd lengths(model.tendon_count());
  for (int i = 0; i < model.tendon_count(); ++i) lengths(i) = tendon_length(model, coeffs, i);
  return lengths;
}

Eigen::MatrixXd config_jacobian(const SegmentModel& model, const Eigen::VectorXd& coeffs) {
  check_coeffs(model, coeffs);
  const int m = model.basis.coeff_count();
  const int p = model.tendon_count();
  const auto& rule = gauss_legendre(model.quadrature_nodes);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(p, m);
  for (int i = 0; i < p; ++i) {
    const auto& tendon = model.routing.tendons[i];
    const double half = 0.5 * tendon.anchor_s;
    for (int q = 0; q < model.quadrature_nodes; ++q) {
      const double s = half * (1.0 + rule.nodes[q]);
      const Eigen::Vector3d w_prime = tendon_path_derivative(model, coeffs, i, s);
      const double norm = w_prime.norm();
      if (norm < 1e-12) {
        throw std::domain_error("config_jacobian: degenerate tendon routing (|w'| ~ 0)");
      }
      const Eigen::Vector3d r = lift(tendon.radial(s));
      // d|w'|/dc = (w'^T / |w'|) (-hat(r) Phi)
      jac.row(i).noalias() +=
          (half * rule.weights[q] / norm) * (w_prime.transpose() * (-hat3(r)) * model.basis.evaluate(s));
    }
  }
  return jac;
}

Eigen::MatrixXd c_tau(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                      const Eigen::VectorXd& tensions) {
  check_coeffs(model, coeffs);
  if (tensions.size() != model.tendon_count()) {
    throw std::invalid_argument("c_tau: tension vector size must match tendon count");
  }
  const int m = model.basis.coeff_count();
  Eigen::MatrixXd term(m, m);
  Eigen::VectorXd c = coeffs;
  for (int i = 0; i < m; ++i) {
    const double h = std::max(1e-6, 1e-6 * std::abs(coeffs(i)));
    c(i) = coeffs(i) + h;
    const Eigen::MatrixXd plus = config_jacobian(model, c);
    c(i) = coeffs(i) - h;
    const Eigen::MatrixXd minus = config_jacobian(model, c);
    c(i) = coeffs(i);
    term.col(i) = ((plus - minus) / (2.0 * h)).transpose() * tensions;
  }
  return term;
}

Eigen::MatrixXd c_wh(const SegmentModel& model, const Eigen::VectorXd& coeffs, const Wrench& w_h) {
  check_coeffs(model, coeffs);
  const auto derivs =
      hybrid_jacobian_coeff_derivatives(model.basis, coeffs, model.integration_steps);
  return wrench_jacobian_term(derivs, w_h);
}

Eigen::VectorXd segment_statics_residual(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                         const Eigen::VectorXd& tensions, const Wrench& w_h,
                                         TendonTermMode mode) {
  check_coeffs(model, coeffs);
  const double tendon_sign = (mode == TendonTermMode::kPhysical) ? 1.0 : -1.0;
  const Eigen::VectorXd gradient = energy_gradient(model.basis, coeffs, model.props);
  const Eigen::MatrixXd j_lc = config_jacobian(model, coeffs);
  const Eigen::MatrixXd hybrid =
      tip_hybrid_jacobian(model.basis, coeffs, model.integration_steps).hybrid;
  return gradient + tendon_sign * j_lc.transpose() * tensions - hybrid.transpose() * w_h.vec();
}

namespace {

Eigen::MatrixXd config_inner_matrix(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                    const Eigen::VectorXd& tensions, TendonTermMode mode) {
  const double sign = (mode == TendonTermMode::kPhysical) ? 1.0 : -1.0;
  const Eigen::MatrixXd hessian = energy_hessian(model.basis, model.props);
  const Eigen::MatrixXd j_lc = config_jacobian(model, coeffs);
  Eigen::MatrixXd inner =
      hessian + sign * (j_lc.transpose() * model.k_line() * j_lc);
  if (tensions.cwiseAbs().maxCoeff() > 0.0) {
    inner += sign * c_tau(model, coeffs, tensions);
  }
  return inner;
}

}  // namespace

ComplianceMatrix task_space_compliance(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                       const Eigen::VectorXd& tensions, const Wrench& w_h,
                                       TendonTermMode mode) {
  Eigen::MatrixXd inner = config_inner_matrix(model, coeffs, tensions, mode);
  const Eigen::MatrixXd hybrid =
      tip_hybrid_jacobian(model.basis, coeffs, model.integration_steps).hybrid;
  if (w_h.vec().squaredNorm() > 0.0) {
    inner -= c_wh(model, coeffs, w_h);
  }
  return compliance_from_inner(hybrid, inner);
}

ConfigCompliance config_space_compliance(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                         const Eigen::VectorXd& tensions, TendonTermMode mode) {
  const Eigen::MatrixXd inner = config_inner_matrix(model, coeffs, tensions, mode);
  const int m = model.basis.coeff_count();
  ConfigCompliance out;
  out.matrix = solve_checked(inner, Eigen::MatrixXd::Identity(m, m), &out.inner_condition);
  return out;
}

Eigen::VectorXd projected_wrench(const SegmentModel& model, const Eigen::VectorXd& coeffs,
                                 const Wrench& w_h) {
  check_coeffs(model, coeffs);
  return tip_hybrid_jacobian(model.basis, coeffs, model.integration_steps)
      .hybrid.transpose() * w_h.vec();
}

Eigen::VectorXd line_tensions(const SegmentModel& model, const ActuationState& actuation,
                              const Eigen::VectorXd& coeffs) {
  if (actuation.released_lengths.size() != model.tendon_count()) {
    throw std::invalid_argument("line_tensions: actuation state size mismatch");
  }
  return model.k_line() * (tendon_lengths(model, coeffs) - actuation.released_lengths);
}

ActuationState actuation_from_pulls(const SegmentModel& model, const Eigen::VectorXd& pulls) {
  if (pulls.size() != model.tendon_count()) {
    throw std::invalid_argument("actuation_from_pulls: pull vector size mismatch");
  }
  const Eigen::VectorXd straight =
      tendon_lengths(model, Eigen::VectorXd::Zero(model.basis.coeff_count()));
  return ActuationState{straight - pulls};
}

}  // namespace rodcomp
