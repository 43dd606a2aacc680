#include "lgllv/spaces/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "lgllv/transport/quadrature.hpp"

namespace lgllv {

VelocityField::VelocityField(const VelocityDofMap& map, std::vector<double> values)
    : map_(&map), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != map.num_dofs())
    throw std::invalid_argument("velocity coefficient vector does not match the dof map");
}

PressureField::PressureField(const PressureDofMap& map, std::vector<double> values)
    : map_(&map), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != map.num_dofs())
    throw std::invalid_argument("pressure coefficient vector does not match the dof map");
}

std::array<double, 12> VelocityField::local(int k) const {
  std::array<double, 12> out{};
  const auto& nodes = map_->element_nodes(k);
  for (int i = 0; i < 6; ++i) {
    out[2 * i] = values_[2 * nodes[i]];
    out[2 * i + 1] = values_[2 * nodes[i] + 1];
  }
  return out;
}

Point eval_velocity(const VelocityField& u, int k, const Bary& bary) {
  const auto phi = p2_values(bary);
  const auto& nodes = u.dof_map().element_nodes(k);
  const auto& v = u.values();
  Point out{};
  for (int i = 0; i < 6; ++i) {
    out.x1 += phi[i] * v[2 * nodes[i]];
    out.x2 += phi[i] * v[2 * nodes[i] + 1];
  }
  return out;
}

Gradient2 eval_velocity_gradient(const VelocityField& u, int k, const Bary& bary) {
  const auto grads = p2_gradients(bary, u.dof_map().barycentric(k).g);
  const auto& nodes = u.dof_map().element_nodes(k);
  const auto& v = u.values();
  Gradient2 out{};
  for (int i = 0; i < 6; ++i) {
    for (int c = 0; c < 2; ++c) {
      out[c][0] += v[2 * nodes[i] + c] * grads[i].x1;
      out[c][1] += v[2 * nodes[i] + c] * grads[i].x2;
    }
  }
  return out;
}

double eval_pressure(const PressureField& p, int k, const Bary& bary) {
  const auto& dofs = p.dof_map().element_dofs(k);
  return bary[0] * p.values()[dofs[0]] + bary[1] * p.values()[dofs[1]] + bary[2] * p.values()[dofs[2]];
}

Point eval_p1(const P1VectorField& w, int k, const Bary& bary) {
  const auto& el = w.mesh().elements()[k];
  return bary[0] * w.values()[el[0]] + bary[1] * w.values()[el[1]] + bary[2] * w.values()[el[2]];
}

P1VectorField interpolate_p1(const VelocityField& u) {
  const Mesh& mesh = u.dof_map().mesh();
  P1VectorField w(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v) w.values()[v] = u.node_value(v);
  return w;
}

VelocityField interpolate_velocity(const VelocityDofMap& map, const std::function<Point(const Point&)>& f) {
  VelocityField u(map);
  for (int i = 0; i < map.num_nodes(); ++i) u.set_node_value(i, f(map.node(i)));
  return u;
}

PressureField interpolate_pressure(const PressureDofMap& map, const std::function<double(const Point&)>& f) {
  PressureField p(map);
  const auto& vertices = map.mesh().vertices();
  for (int i = 0; i < map.num_dofs(); ++i) p.values()[i] = f(vertices[i]);
  return p;
}

double norm_l2(const VelocityField& u) {
  const auto& rule = six_point_rule();
  const Mesh& mesh = u.dof_map().mesh();
  double sum = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    double local = 0.0;
    for (const auto& q : rule.points) {
      const Point v = eval_velocity(u, k, q.bary);
      local += q.weight * dot(v, v);
    }
    sum += local * mesh.area(k);
  }
  return std::sqrt(sum);
}

double seminorm_h1(const VelocityField& u) {
  const auto& rule = triangle_rule(2);
  const Mesh& mesh = u.dof_map().mesh();
  double sum = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    double local = 0.0;
    for (const auto& q : rule.points) {
      const Gradient2 g = eval_velocity_gradient(u, k, q.bary);
      local += q.weight * (g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1]);
    }
    sum += local * mesh.area(k);
  }
  return std::sqrt(sum);
}

double norm_h1(const VelocityField& u) { return std::hypot(norm_l2(u), seminorm_h1(u)); }

double norm_l2(const PressureField& p) {
  const auto& rule = triangle_rule(2);
  const Mesh& mesh = p.dof_map().mesh();
  double sum = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    double local = 0.0;
    for (const auto& q : rule.points) {
      const double v = eval_pressure(p, k, q.bary);
      local += q.weight * v * v;
    }
    sum += local * mesh.area(k);
  }
  return std::sqrt(sum);
}

double mean_value(const PressureField& p) {
  const Mesh& mesh = p.dof_map().mesh();
  double sum = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& d = p.dof_map().element_dofs(k);
    sum += mesh.area(k) * (p.values()[d[0]] + p.values()[d[1]] + p.values()[d[2]]) / 3.0;
  }
  return sum / mesh.total_area();
}

VelocityField operator-(const VelocityField& a, const VelocityField& b) {
  std::vector<double> v(a.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values()[i];
  return VelocityField(a.dof_map(), std::move(v));
}

PressureField operator-(const PressureField& a, const PressureField& b) {
  std::vector<double> v(a.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values()[i];
  return PressureField(a.dof_map(), std::move(v));
}

TimeSeriesNorms TimeSeriesAccumulator::result() const { return {linf_h1_, std::sqrt(dt_ * sum_l2_sq_)}; }

TimeSeriesNorms time_series_norms(std::span<const VelocityField> series, double dt) {
  if (series.empty()) throw std::invalid_argument("time_series_norms needs a nonempty series");
  TimeSeriesAccumulator acc(dt);
  for (std::size_t n = 0; n < series.size(); ++n) acc.add(static_cast<long>(n), norm_h1(series[n]), norm_l2(series[n]));
  return acc.result();
}

}  // namespace lgllv
