#include "lgllv/assembly/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lgllv/transport/quadrature.hpp"

namespace lgllv {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct LocalP2 {
  std::array<std::array<double, 6>, 6> mass{};
  std::array<std::array<double, 6>, 6> stiffness{};
};

LocalP2 local_p2(const VelocityDofMap& dofs, int k) {
  LocalP2 out;
  const double area = dofs.mesh().area(k);
  const auto& g = dofs.barycentric(k).g;
  for (const auto& q : six_point_rule().points) {
    const auto phi = p2_values(q.bary);
    const auto grad = p2_gradients(q.bary, g);
    const double w = q.weight * area;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        out.mass[i][j] += w * phi[i] * phi[j];
        out.stiffness[i][j] += w * dot(grad[i], grad[j]);
      }
    }
  }
  return out;
}

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseMatrix assemble_vector_block(const VelocityDofMap& dofs, bool stiffness, double scale) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(dofs.mesh().num_elements()) * 72);
  for (int k = 0; k < dofs.mesh().num_elements(); ++k) {
    const LocalP2 local = local_p2(dofs, k);
    const auto& m = stiffness ? local.stiffness : local.mass;
    const auto& nodes = dofs.element_nodes(k);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int c = 0; c < 2; ++c)
          t.emplace_back(VelocityDofMap::dof(nodes[i], c), VelocityDofMap::dof(nodes[j], c), scale * m[i][j]);
  }
  return from_triplets(dofs.num_dofs(), dofs.num_dofs(), t);
}

SparseMatrix assemble_scalar_block(const VelocityDofMap& dofs, bool stiffness) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(dofs.mesh().num_elements()) * 36);
  for (int k = 0; k < dofs.mesh().num_elements(); ++k) {
    const LocalP2 local = local_p2(dofs, k);
    const auto& m = stiffness ? local.stiffness : local.mass;
    const auto& nodes = dofs.element_nodes(k);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) t.emplace_back(nodes[i], nodes[j], m[i][j]);
  }
  return from_triplets(dofs.num_nodes(), dofs.num_nodes(), t);
}

}  // namespace

SparseMatrix assemble_stiffness(const VelocityDofMap& dofs, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  return assemble_vector_block(dofs, true, nu);
}

SparseMatrix assemble_velocity_mass(const VelocityDofMap& dofs) { return assemble_vector_block(dofs, false, 1.0); }

SparseMatrix assemble_p2_scalar_mass(const VelocityDofMap& dofs) { return assemble_scalar_block(dofs, false); }

SparseMatrix assemble_p2_scalar_stiffness(const VelocityDofMap& dofs) { return assemble_scalar_block(dofs, true); }

SparseMatrix assemble_divergence(const VelocityDofMap& vdofs, const PressureDofMap& pdofs) {
  Triplets t;
  const Mesh& mesh = vdofs.mesh();
  t.reserve(static_cast<std::size_t>(mesh.num_elements()) * 36);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    std::array<std::array<double, 12>, 3> local{};
    const double area = mesh.area(k);
    const auto& g = vdofs.barycentric(k).g;
    for (const auto& q : six_point_rule().points) {
      const auto grad = p2_gradients(q.bary, g);
      const double w = q.weight * area;
      for (int a = 0; a < 3; ++a) {
        for (int i = 0; i < 6; ++i) {
          local[a][2 * i] -= w * q.bary[a] * grad[i].x1;
          local[a][2 * i + 1] -= w * q.bary[a] * grad[i].x2;
        }
      }
    }
    const auto& nodes = vdofs.element_nodes(k);
    const auto& pd = pdofs.element_dofs(k);
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 6; ++i)
        for (int c = 0; c < 2; ++c) t.emplace_back(pd[a], VelocityDofMap::dof(nodes[i], c), local[a][2 * i + c]);
  }
  return from_triplets(pdofs.num_dofs(), vdofs.num_dofs(), t);
}

Vector mean_pressure_constraint(const PressureDofMap& pdofs) {
  const Mesh& mesh = pdofs.mesh();
  Vector c = Vector::Zero(pdofs.num_dofs());
  for (int k = 0; k < mesh.num_elements(); ++k)
    for (int v : pdofs.element_dofs(k)) c[v] += mesh.area(k) / 3.0;
  return c;
}

double LidProfile::operator()(double s, double length) const {
  const double width = ramp * length;
  const double d = std::min(s, length - s);
  if (d <= 0.0) return 0.0;
  if (width <= 0.0 || d >= width) return 1.0;
  const double t = d / width;
  return t * t * (3.0 - 2.0 * t);
}

DirichletData lid_driven_dirichlet(const VelocityDofMap& dofs, const LidProfile& profile) {
  const Mesh& mesh = dofs.mesh();
  const int nv = mesh.num_vertices();
  for (int i = 0; i < dofs.num_nodes(); ++i)
    if (dofs.node_class(i) == NodeClass::Unlabeled)
      throw ConfigurationError("boundary node " + std::to_string(i) + " lies on an unlabeled boundary edge");

  // Arclength of lid vertices along each lid chain.
  std::map<int, std::vector<int>> adjacency;
  for (const Edge& e : mesh.edges()) {
    if (!e.on_boundary() || e.label != kLid) continue;
    adjacency[e.vertices[0]].push_back(e.vertices[1]);
    adjacency[e.vertices[1]].push_back(e.vertices[0]);
  }
  std::vector<double> arclength(nv, 0.0), chain_length(nv, 0.0);
  std::vector<char> visited(nv, 0);
  const auto& v = mesh.vertices();
  auto before = [&](int a, int b) { return v[a].x1 < v[b].x1 || (v[a].x1 == v[b].x1 && v[a].x2 < v[b].x2); };
  std::vector<int> ends;
  for (const auto& [vertex, nbrs] : adjacency)
    if (nbrs.size() == 1) ends.push_back(vertex);
  std::sort(ends.begin(), ends.end(), before);
  for (int start : ends) {
    if (visited[start]) continue;
    std::vector<int> chain{start};
    visited[start] = 1;
    for (int cur = start;;) {
      int next = -1;
      for (int nb : adjacency[cur])
        if (!visited[nb]) next = nb;
      if (next < 0) break;
      arclength[next] = arclength[cur] + distance(v[cur], v[next]);
      visited[next] = 1;
      chain.push_back(next);
      cur = next;
    }
    for (int c : chain) chain_length[c] = arclength[chain.back()];
  }
  for (const auto& [vertex, nbrs] : adjacency)
    if (!visited[vertex]) throw ConfigurationError("lid edges form a closed loop");

  DirichletData out;
  auto speed = [&](int node) {
    if (dofs.is_vertex_node(node)) return profile(arclength[node], chain_length[node]);
    const Edge& e = mesh.edges()[node - nv];
    const int a = e.vertices[0], b = e.vertices[1];
    const double s = 0.5 * (arclength[a] + arclength[b]);
    return profile(s, chain_length[a]);
  };
  for (int i = 0; i < dofs.num_nodes(); ++i) {
    const NodeClass c = dofs.node_class(i);
    if (c == NodeClass::Interior) continue;
    const double g = c == NodeClass::Lid ? speed(i) : 0.0;
    out.dofs.push_back(VelocityDofMap::dof(i, 0));
    out.values.push_back(g);
    out.dofs.push_back(VelocityDofMap::dof(i, 1));
    out.values.push_back(0.0);
  }
  return out;
}

DirichletData dirichlet_from_function(const VelocityDofMap& dofs, const std::function<Point(const Point&)>& f) {
  DirichletData out;
  for (int i = 0; i < dofs.num_nodes(); ++i) {
    if (dofs.node_class(i) == NodeClass::Interior) continue;
    const Point g = f(dofs.node(i));
    out.dofs.push_back(VelocityDofMap::dof(i, 0));
    out.values.push_back(g.x1);
    out.dofs.push_back(VelocityDofMap::dof(i, 1));
    out.values.push_back(g.x2);
  }
  return out;
}

SaddleSystem build_saddle_system(const SparseMatrix& velocity_block, const SparseMatrix& divergence,
                                 const Vector* constraint) {
  SaddleSystem s;
  s.num_velocity = static_cast<int>(velocity_block.rows());
  s.num_pressure = static_cast<int>(divergence.rows());
  s.mean_constraint = constraint != nullptr;
  const int n = s.num_velocity + s.num_pressure + (s.mean_constraint ? 1 : 0);
  Triplets t;
  t.reserve(velocity_block.nonZeros() + 2 * divergence.nonZeros() + 2 * s.num_pressure);
  for (int col = 0; col < velocity_block.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(velocity_block, col); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int col = 0; col < divergence.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(divergence, col); it; ++it) {
      const int p = s.num_velocity + static_cast<int>(it.row());
      t.emplace_back(p, it.col(), it.value());
      t.emplace_back(it.col(), p, it.value());
    }
  }
  if (s.mean_constraint) {
    const int l = n - 1;
    for (int i = 0; i < s.num_pressure; ++i) {
      t.emplace_back(s.num_velocity + i, l, (*constraint)[i]);
      t.emplace_back(l, s.num_velocity + i, (*constraint)[i]);
    }
  }
  s.matrix = from_triplets(n, n, t);
  s.lift = Vector::Zero(n);
  return s;
}

void apply_dirichlet(SaddleSystem& system, const DirichletData& data) {
  const int n = system.size();
  std::vector<double> value(n, 0.0);
  std::vector<char> fixed(n, 0);
  for (std::size_t i = 0; i < data.dofs.size(); ++i) {
    fixed[data.dofs[i]] = 1;
    value[data.dofs[i]] = data.values[i];
  }
  Triplets t;
  t.reserve(system.matrix.nonZeros());
  Vector lift = Vector::Zero(n);
  for (int col = 0; col < system.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(system.matrix, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (fixed[r]) continue;
      if (fixed[col]) {
        lift[r] += it.value() * value[col];
        continue;
      }
      t.emplace_back(r, col, it.value());
    }
  }
  for (int d : data.dofs) t.emplace_back(d, d, 1.0);
  system.matrix = from_triplets(n, n, t);
  system.lift = std::move(lift);
  system.dirichlet = data;
}

Vector SaddleSystem::rhs(const Vector& velocity_load) const {
  return rhs(velocity_load, Vector::Zero(num_pressure));
}

Vector SaddleSystem::rhs(const Vector& velocity_load, const Vector& continuity_load) const {
  Vector b = Vector::Zero(size());
  b.head(num_velocity) = velocity_load;
  b.segment(num_velocity, num_pressure) = continuity_load;
  b -= lift;
  for (std::size_t i = 0; i < dirichlet.dofs.size(); ++i) b[dirichlet.dofs[i]] = dirichlet.values[i];
  return b;
}

Vector assemble_source(const VelocityDofMap& dofs, const VectorFunction& f, double time) {
  static const QuadratureRule rule = collapsed_gauss_rule(6);
  const Mesh& mesh = dofs.mesh();
  Vector load = Vector::Zero(dofs.num_dofs());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const Triangle t = mesh.triangle(k);
    const auto& nodes = dofs.element_nodes(k);
    for (const auto& q : rule.points) {
      const Point fx = f(from_barycentric(t, q.bary), time);
      const auto phi = p2_values(q.bary);
      const double w = q.weight * mesh.area(k);
      for (int i = 0; i < 6; ++i) {
        load[VelocityDofMap::dof(nodes[i], 0)] += w * fx.x1 * phi[i];
        load[VelocityDofMap::dof(nodes[i], 1)] += w * fx.x2 * phi[i];
      }
    }
  }
  return load;
}

Vector assemble_rhs(const CompositeIntegrator& integrator, const VelocityField& u_prev, double dt,
                    const VectorFunction* source, double time, const CompositeMode& mode, RhsStats* stats) {
  const VelocityDofMap& dofs = integrator.dof_map();
  const Mesh& mesh = dofs.mesh();
  const int ne = mesh.num_elements();
  const P1VectorField w = interpolate_p1(u_prev);
  const QuadratureRule rule = mode.exact ? six_point_rule() : triangle_rule(mode.quadrature_degree);

  std::vector<std::array<double, 12>> local(ne);
  std::vector<CompositeStats> local_stats(ne);
  std::vector<double> bad_det(ne, 1.0);
  std::vector<char> bad(ne, 0);

#pragma omp parallel for schedule(dynamic, 64)
  for (int k = 0; k < ne; ++k) {
    if (mode.exact) {
      const ElementMap em = x1_map_on_element(w, dt, k);
      if (check_injectivity(em.map, k)) {
        bad[k] = 1;
        bad_det[k] = em.map.det;
        continue;
      }
      local[k] = integrator.local_vector(u_prev, em, rule, &local_stats[k]);
    } else {
      local[k] = integrator.local_vector_quadrature(u_prev, u_prev, dt, k, rule, &local_stats[k]);
    }
  }
  for (int k = 0; k < ne; ++k)
    if (bad[k]) throw NonInjectiveMap(NonInjective{k, bad_det[k]});

  Vector load = Vector::Zero(dofs.num_dofs());
  RhsStats s;
  const double inv_dt = 1.0 / dt;
  for (int k = 0; k < ne; ++k) {
    const auto& nodes = dofs.element_nodes(k);
    for (int i = 0; i < 6; ++i) {
      load[VelocityDofMap::dof(nodes[i], 0)] += inv_dt * local[k][2 * i];
      load[VelocityDofMap::dof(nodes[i], 1)] += inv_dt * local[k][2 * i + 1];
    }
    if (local_stats[k].out_of_domain) ++s.out_of_domain_elements;
    s.max_deficit = std::max(s.max_deficit, local_stats[k].deficit);
    s.projected_points += local_stats[k].projected_points;
  }
  if (source) load += assemble_source(dofs, *source, time);
  if (stats) *stats = s;
  return load;
}

double symmetry_defect(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  double dmax = 0.0, amax = 0.0;
  for (int col = 0; col < diff.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(diff, col); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) amax = std::max(amax, std::abs(it.value()));
  return amax > 0.0 ? dmax / amax : 0.0;
}

}  // namespace lgllv
