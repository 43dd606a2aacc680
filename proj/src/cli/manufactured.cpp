#include "lgllv/cli/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lgllv {

ManufacturedSolution trigonometric_solution(double nu, double amplitude) {
  using std::cos;
  using std::sin;
  constexpr double pi = std::numbers::pi;
  const double a = amplitude;

  // Spatial parts U, P; u = a (1+t) U, p = a (1+t) P.
  auto U = [](const Point& x) {
    const double s1 = sin(pi * x.x1), s2 = sin(pi * x.x2);
    return Point{pi * s1 * s1 * sin(2 * pi * x.x2), -pi * sin(2 * pi * x.x1) * s2 * s2};
  };
  auto gradU = [](const Point& x) {
    const double s1 = sin(pi * x.x1), s2 = sin(pi * x.x2);
    const double du1_dx1 = pi * pi * sin(2 * pi * x.x1) * sin(2 * pi * x.x2);
    const double du1_dx2 = 2 * pi * pi * s1 * s1 * cos(2 * pi * x.x2);
    const double du2_dx1 = -2 * pi * pi * cos(2 * pi * x.x1) * s2 * s2;
    return Gradient2{{{du1_dx1, du1_dx2}, {du2_dx1, -du1_dx1}}};
  };
  auto lapU = [](const Point& x) {
    const double p3 = 2 * pi * pi * pi;
    return Point{p3 * sin(2 * pi * x.x2) * (2 * cos(2 * pi * x.x1) - 1),
                 -p3 * sin(2 * pi * x.x1) * (2 * cos(2 * pi * x.x2) - 1)};
  };
  auto gradP = [](const Point& x) {
    return Point{pi * cos(pi * x.x1) * cos(pi * x.x2), -pi * sin(pi * x.x1) * sin(pi * x.x2)};
  };

  ManufacturedSolution ms;
  ms.id = "trig";
  ms.domain = DomainPreset::unit_square();
  ms.nu = nu;
  ms.u = [=](const Point& x, double t) { return U(x) * (a * (1 + t)); };
  ms.grad_u = [=](const Point& x, double t) {
    Gradient2 g = gradU(x);
    for (auto& row : g)
      for (double& v : row) v *= a * (1 + t);
    return g;
  };
  ms.p = [=](const Point& x, double t) { return a * (1 + t) * sin(pi * x.x1) * cos(pi * x.x2); };
  ms.f = [=](const Point& x, double t) {
    const double s = a * (1 + t);
    const Point u = U(x);
    const Gradient2 g = gradU(x);
    // (u . grad) u for the spatial part.
    const Point conv{g[0][0] * u.x1 + g[0][1] * u.x2, g[1][0] * u.x1 + g[1][1] * u.x2};
    return u * a + conv * (s * s) - lapU(x) * (nu * s) + gradP(x) * s;
  };
  return ms;
}

ManufacturedSolution constant_flow_solution(double nu, Point c) {
  ManufacturedSolution ms;
  ms.id = "constant";
  ms.domain = DomainPreset::unit_square();
  ms.nu = nu;
  ms.u = [c](const Point&, double) { return c; };
  ms.grad_u = [](const Point&, double) { return Gradient2{}; };
  ms.p = [](const Point& x, double) { return x.x1 - 0.5; };
  ms.f = [](const Point&, double) { return Point{1.0, 0.0}; };
  ms.zero_trace = false;
  ms.steady = true;
  return ms;
}

ManufacturedSolution manufactured_by_id(const std::string& id, double nu, double amplitude) {
  if (id == "trig") return trigonometric_solution(nu, amplitude);
  if (id == "constant") return constant_flow_solution(nu);
  throw std::invalid_argument("unknown manufactured solution '" + id + "' (expected trig or constant)");
}

}  // namespace lgllv
