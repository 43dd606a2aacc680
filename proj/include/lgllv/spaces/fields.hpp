#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "lgllv/spaces/dof_map.hpp"

namespace lgllv {

using Bary = std::array<double, 3>;
/// grad[i][j] = d u_i / d x_j
using Gradient2 = std::array<std::array<double, 2>, 2>;

/// P2 shape function values at barycentric coordinates (local node order of
/// VelocityDofMap).
inline std::array<double, 6> p2_values(const Bary& l) {
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

/// P2 shape function gradients given the barycentric gradients `g`.
inline std::array<Point, 6> p2_gradients(const Bary& l, const std::array<Point, 3>& g) {
  return {(4.0 * l[0] - 1.0) * g[0],       (4.0 * l[1] - 1.0) * g[1],       (4.0 * l[2] - 1.0) * g[2],
          4.0 * (l[1] * g[0] + l[0] * g[1]), 4.0 * (l[2] * g[1] + l[1] * g[2]), 4.0 * (l[0] * g[2] + l[2] * g[0])};
}

/// P2 vector field coefficients (dof order of VelocityDofMap).
class VelocityField {
 public:
  explicit VelocityField(const VelocityDofMap& map) : map_(&map), values_(map.num_dofs(), 0.0) {}
  VelocityField(const VelocityDofMap& map, std::vector<double> values);

  const VelocityDofMap& dof_map() const { return *map_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  Point node_value(int node) const { return {values_[2 * node], values_[2 * node + 1]}; }
  void set_node_value(int node, const Point& v) {
    values_[2 * node] = v.x1;
    values_[2 * node + 1] = v.x2;
  }
  /// The 12 local coefficients of element k, interleaved per local node.
  std::array<double, 12> local(int k) const;

 private:
  const VelocityDofMap* map_;
  std::vector<double> values_;
};

/// P1 scalar field coefficients on the vertices.
class PressureField {
 public:
  explicit PressureField(const PressureDofMap& map) : map_(&map), values_(map.num_dofs(), 0.0) {}
  PressureField(const PressureDofMap& map, std::vector<double> values);

  const PressureDofMap& dof_map() const { return *map_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  const PressureDofMap* map_;
  std::vector<double> values_;
};

/// Continuous piecewise linear vector field, one value per mesh vertex.
class P1VectorField {
 public:
  explicit P1VectorField(const Mesh& mesh) : mesh_(&mesh), values_(mesh.num_vertices()) {}

  const Mesh& mesh() const { return *mesh_; }
  const std::vector<Point>& values() const { return values_; }
  std::vector<Point>& values() { return values_; }

 private:
  const Mesh* mesh_;
  std::vector<Point> values_;
};

Point eval_velocity(const VelocityField& u, int k, const Bary& bary);
Gradient2 eval_velocity_gradient(const VelocityField& u, int k, const Bary& bary);
double eval_pressure(const PressureField& p, int k, const Bary& bary);
Point eval_p1(const P1VectorField& w, int k, const Bary& bary);

/// Lagrange interpolation onto P1: keeps the vertex values, drops midpoints.
P1VectorField interpolate_p1(const VelocityField& u);

VelocityField interpolate_velocity(const VelocityDofMap& map, const std::function<Point(const Point&)>& f);
PressureField interpolate_pressure(const PressureDofMap& map, const std::function<double(const Point&)>& f);

double norm_l2(const VelocityField& u);
double seminorm_h1(const VelocityField& u);
double norm_h1(const VelocityField& u);
double norm_l2(const PressureField& p);
double mean_value(const PressureField& p);

VelocityField operator-(const VelocityField& a, const VelocityField& b);
PressureField operator-(const PressureField& a, const PressureField& b);

struct TimeSeriesNorms {
  double linf_h1 = 0.0;  // max over n = 0..N of the H1 norm
  double l2_l2 = 0.0;    // (dt * sum over n = 1..N of the squared L2 norm)^(1/2)
};

/// Discrete-in-time norms of a series indexed from n = 0.
TimeSeriesNorms time_series_norms(std::span<const VelocityField> series, double dt);

/// Streaming form of time_series_norms for runs that do not keep the series.
class TimeSeriesAccumulator {
 public:
  explicit TimeSeriesAccumulator(double dt) : dt_(dt) {}
  void add(long n, double h1, double l2) {
    linf_h1_ = std::max(linf_h1_, h1);
    if (n >= 1) sum_l2_sq_ += l2 * l2;
  }
  TimeSeriesNorms result() const;

 private:
  double dt_;
  double linf_h1_ = 0.0;
  double sum_l2_sq_ = 0.0;
};

}  // namespace lgllv
