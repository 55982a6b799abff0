#pragma once

#include <functional>
#include <vector>

namespace rodcomp {

// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes/weights for an n-point rule. Results are cached; thread-safe.
const GaussLegendreRule& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace rodcomp
