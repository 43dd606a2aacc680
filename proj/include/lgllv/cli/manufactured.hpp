#pragma once

#include <functional>
#include <string>

#include "lgllv/assembly/assembly.hpp"
#include "lgllv/mesh/cavity_mesh.hpp"

namespace lgllv {

/// Exact (u, p) of the Navier-Stokes system with the matching source f.
struct ManufacturedSolution {
  std::string id;
  DomainPreset domain;
  double nu = 1.0;
  std::function<Point(const Point&, double)> u;
  std::function<Gradient2(const Point&, double)> grad_u;
  std::function<double(const Point&, double)> p;
  VectorFunction f;
  /// Zero trace on the boundary; otherwise boundary data is u(., t).
  bool zero_trace = true;
  /// Velocity independent of t (boundary data may then be frozen).
  bool steady = false;
};

/// On the unit square: u = A (1+t) curl-perp(sin^2(pi x1) sin^2(pi x2)),
/// p = A (1+t) sin(pi x1) cos(pi x2), which has mean zero.
ManufacturedSolution trigonometric_solution(double nu, double amplitude = 1.0);

/// Constant velocity `c` and linear pressure p = x1 - 1/2 on the unit square
/// with f = grad p. The scheme reproduces it exactly.
ManufacturedSolution constant_flow_solution(double nu, Point c = {1.0, 0.5});

/// Looks up "trig" or "constant".
ManufacturedSolution manufactured_by_id(const std::string& id, double nu, double amplitude = 1.0);

}  // namespace lgllv
