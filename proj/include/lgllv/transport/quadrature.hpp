#pragma once

#include <array>
#include <string>
#include <vector>

namespace lgllv {

struct QuadraturePoint {
  std::array<double, 3> bary{};
  double weight = 0.0;  // fraction of the triangle area; weights sum to 1
};

/// Rule on the reference triangle in barycentric form. Integrates polynomials
/// of total degree <= `degree` exactly: integral over T of f equals
/// |T| * sum_q w_q f(x_q).
struct QuadratureRule {
  std::vector<QuadraturePoint> points;
  int degree = 0;
  std::string name;
};

/// Symmetric 6-point rule of degree 4.
const QuadratureRule& six_point_rule();

/// Smallest available rule reaching `degree`: centroid (1), 3-point (2),
/// 6-point (4), 7-point (5), then collapsed Gauss-Legendre product rules.
QuadratureRule triangle_rule(int degree);

/// Collapsed (Duffy) tensor Gauss-Legendre rule with `n` points per
/// direction; exact to degree 2n - 2 (the collapse adds one degree).
QuadratureRule collapsed_gauss_rule(int n);

/// Gauss-Legendre nodes and weights on [0, 1].
std::vector<std::array<double, 2>> gauss_legendre_01(int n);

}  // namespace lgllv
