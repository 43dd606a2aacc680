#include "lgllv/transport/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lgllv {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double weight) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({{a, a, b}, weight});
  rule.points.push_back({{a, b, a}, weight});
  rule.points.push_back({{b, a, a}, weight});
}

QuadratureRule make_six_point() {
  QuadratureRule r;
  r.degree = 4;
  r.name = "6-point degree 4";
  add_orbit3(r, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312);
  add_orbit3(r, 0.091576213509770743459571463402202, 0.10995174365532186763832632490021);
  return r;
}

}  // namespace

const QuadratureRule& six_point_rule() {
  static const QuadratureRule rule = make_six_point();
  return rule;
}

namespace {

/// (P_n(x), P_n'(x)) by the three-term recurrence.
std::array<double, 2> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

std::vector<std::array<double, 2>> gauss_legendre_01(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01 needs n >= 1");
  std::vector<std::array<double, 2>> out(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x)[1];
    out[n - 1 - i] = {0.5 * (x + 1.0), 1.0 / ((1.0 - x * x) * dp * dp)};
  }
  return out;
}

QuadratureRule collapsed_gauss_rule(int n) {
  QuadratureRule r;
  r.degree = 2 * n - 2;
  r.name = "collapsed Gauss " + std::to_string(n) + "x" + std::to_string(n);
  const auto gl = gauss_legendre_01(n);
  // (s, t) in [0,1]^2 -> lambda1 = s (1 - t), lambda2 = t; Jacobian (1 - t).
  for (const auto& [t, wt] : gl) {
    for (const auto& [s, ws] : gl) {
      const double l1 = s * (1.0 - t);
      const double l2 = t;
      r.points.push_back({{1.0 - l1 - l2, l1, l2}, 2.0 * ws * wt * (1.0 - t)});
    }
  }
  return r;
}

QuadratureRule triangle_rule(int degree) {
  if (degree <= 1) {
    return {{{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 1.0}}, 1, "centroid"};
  }
  if (degree == 2) {
    QuadratureRule r;
    r.degree = 2;
    r.name = "3-point degree 2";
    add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    return r;
  }
  if (degree <= 4) return six_point_rule();
  if (degree == 5) {
    QuadratureRule r;
    r.degree = 5;
    r.name = "7-point degree 5";
    const double s15 = std::sqrt(15.0);
    r.points.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0});
    add_orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
    add_orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
    return r;
  }
  return collapsed_gauss_rule((degree + 3) / 2);
}

}  // namespace lgllv
