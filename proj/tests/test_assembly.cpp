#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "lgllv/assembly/assembly.hpp"
#include "lgllv/mesh/cavity_mesh.hpp"

using namespace lgllv;

namespace {

Mesh one_element() {
  return Mesh({{0.1, 0.0}, {1.2, 0.3}, {0.4, 0.9}}, {{0, 1, 2}},
              {{{0, 1}, kWall}, {{1, 2}, kWall}, {{2, 0}, kWall}});
}

Vector as_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), v.size()); }

struct Linear {
  double a11, a12, a21, a22, b1, b2;
  Point operator()(const Point& x) const { return {a11 * x.x1 + a12 * x.x2 + b1, a21 * x.x1 + a22 * x.x2 + b2}; }
};

}  // namespace

TEST_CASE("stiffness on one element matches gradient products") {
  Mesh m = one_element();
  VelocityDofMap dofs(m);
  const double nu = 0.37;
  SparseMatrix a = assemble_stiffness(dofs, nu);
  Linear f{1.0, -2.0, 0.5, 3.0, 0.2, -0.1}, g{-0.3, 0.7, 1.1, 0.4, 1.0, 2.0};
  Vector uf = as_vector(interpolate_velocity(dofs, f).values());
  Vector ug = as_vector(interpolate_velocity(dofs, g).values());
  double grad_product = f.a11 * g.a11 + f.a12 * g.a12 + f.a21 * g.a21 + f.a22 * g.a22;
  CHECK(uf.dot(a * ug) == doctest::Approx(nu * m.area(0) * grad_product).epsilon(1e-13));
  CHECK(symmetry_defect(a) < 1e-15);
}

TEST_CASE("stiffness scales with nu and annihilates constants") {
  Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), 5);
  VelocityDofMap dofs(m);
  SparseMatrix a1 = assemble_stiffness(dofs, 1.0), a3 = assemble_stiffness(dofs, 3.0);
  CHECK((a3 - 3.0 * a1).norm() <= 1e-13 * a3.norm());
  Vector ones = as_vector(interpolate_velocity(dofs, [](const Point&) { return Point{1.0, -2.0}; }).values());
  Vector r = a1 * ones;
  CHECK(r.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(symmetry_defect(a1) < 1e-14);
}

TEST_CASE("divergence operator") {
  Mesh m = generate_cavity_mesh(DomainPreset::isosceles(1.0, 2.0), 6);
  VelocityDofMap vd(m);
  PressureDofMap pd(m);
  SparseMatrix b = assemble_divergence(vd, pd);
  CHECK(b.rows() == pd.num_dofs());
  CHECK(b.cols() == vd.num_dofs());
  auto apply = [&](auto f) { return Vector(b * as_vector(interpolate_velocity(vd, f).values())); };
  CHECK(apply([](const Point&) { return Point{0.3, -1.0}; }).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(apply([](const Point& x) { return Point{x.x1, -x.x2}; }).cwiseAbs().maxCoeff() < 1e-14);
  Vector bu = apply([](const Point& x) { return Point{x.x1, x.x2}; });
  CHECK(bu.sum() == doctest::Approx(-2.0 * m.total_area()).epsilon(1e-13));
}

TEST_CASE("velocity mass") {
  Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), 4);
  VelocityDofMap dofs(m);
  SparseMatrix mass = assemble_velocity_mass(dofs);
  Vector e1 = as_vector(interpolate_velocity(dofs, [](const Point&) { return Point{1.0, 0.0}; }).values());
  Vector e2 = as_vector(interpolate_velocity(dofs, [](const Point&) { return Point{0.0, 1.0}; }).values());
  CHECK(e1.dot(mass * e1) == doctest::Approx(m.total_area()).epsilon(1e-13));
  CHECK(e2.dot(mass * e2) == doctest::Approx(m.total_area()).epsilon(1e-13));
  CHECK(e1.dot(mass * e2) == 0.0);
  CHECK(symmetry_defect(mass) < 1e-15);

  Eigen::MatrixXd dense(mass);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);

  // Tabulated P2 mass matrix (times 180 / area).
  Mesh one = one_element();
  VelocityDofMap od(one);
  SparseMatrix om = assemble_velocity_mass(od);
  const double table[6][6] = {{6, -1, -1, 0, -4, 0},  {-1, 6, -1, 0, 0, -4},  {-1, -1, 6, -4, 0, 0},
                              {0, 0, -4, 32, 16, 16}, {-4, 0, 0, 16, 32, 16}, {0, -4, 0, 16, 16, 32}};
  const auto& nodes = od.element_nodes(0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double want = one.area(0) / 180 * table[i][j];
      CHECK(std::fabs(om.coeff(2 * nodes[i], 2 * nodes[j]) - want) < 1e-15);
      CHECK(std::fabs(om.coeff(2 * nodes[i] + 1, 2 * nodes[j] + 1) - want) < 1e-15);
      CHECK(om.coeff(2 * nodes[i], 2 * nodes[j] + 1) == 0.0);
    }
}

TEST_CASE("mean pressure constraint") {
  for (int n : {2, 3, 8}) {
    Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), n);
    Vector c = mean_pressure_constraint(PressureDofMap(m));
    CHECK(std::fabs(c.sum() - m.total_area()) <= 1e-13);
  }
  // n = 2: corners touch one element, side midpoints three (area sqrt(3)/16 each).
  Mesh m2 = generate_cavity_mesh(DomainPreset::equilateral(), 2);
  Vector c2 = mean_pressure_constraint(PressureDofMap(m2));
  const auto corners = DomainPreset::equilateral().corners;
  for (int v = 0; v < m2.num_vertices(); ++v) {
    bool corner = false;
    for (const auto& c : corners) corner = corner || distance(c, m2.vertices()[v]) < 1e-14;
    double want = corner ? std::sqrt(3.0) / 48 : std::sqrt(3.0) / 16;
    CHECK(c2[v] == doctest::Approx(want).epsilon(1e-14));
  }
  // Interior vertices of a uniform mesh share one weight.
  Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), 6);
  VelocityDofMap vd(m);
  Vector c = mean_pressure_constraint(PressureDofMap(m));
  double interior = -1.0;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (vd.node_class(v) != NodeClass::Interior) continue;
    if (interior < 0) interior = c[v];
    CHECK(c[v] == doctest::Approx(interior).epsilon(1e-13));
  }
  CHECK(interior == doctest::Approx(2.0 * m.area(0)).epsilon(1e-13));
}

TEST_CASE("lid profile") {
  LidProfile g{1.0 / 16};
  CHECK(g(0.5, 1.0) == 1.0);
  CHECK(g(0.0, 1.0) == 0.0);
  CHECK(g(1.0, 1.0) == 0.0);
  // Continuous at the ramp breaks.
  const double w = 1.0 / 16;
  CHECK(std::fabs(g(w - 1e-12, 1.0) - g(w + 1e-12, 1.0)) < 1e-10);
  CHECK(std::fabs(g(1 - w - 1e-12, 1.0) - g(1 - w + 1e-12, 1.0)) < 1e-10);
  CHECK(g(w / 2, 1.0) == doctest::Approx(0.5));
  // Symmetric and monotone on the ramp.
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    double s = w * i / 100;
    CHECK(g(s, 1.0) >= prev);
    CHECK(g(s, 1.0) == doctest::Approx(g(1.0 - s, 1.0)).epsilon(1e-12));
    prev = g(s, 1.0);
  }
  // Vanishing ramp: the discontinuous profile at interior points.
  LidProfile sharp{0.0};
  for (double s : {1e-9, 0.01, 0.3, 0.999999}) CHECK(sharp(s, 1.0) == 1.0);
  LidProfile tiny{1e-9};
  for (double s : {1e-6, 0.01, 0.5, 0.99}) CHECK(tiny(s, 1.0) == 1.0);
}

TEST_CASE("lid-driven boundary data") {
  const int n = 16;
  Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), n);
  VelocityDofMap dofs(m);
  LidProfile g{1.0 / 16};
  DirichletData bc = lid_driven_dirichlet(dofs, g);
  CHECK(std::is_sorted(bc.dofs.begin(), bc.dofs.end()));
  int boundary_nodes = 0;
  for (int i = 0; i < dofs.num_nodes(); ++i) boundary_nodes += dofs.node_class(i) != NodeClass::Interior;
  CHECK(bc.dofs.size() == static_cast<std::size_t>(2 * boundary_nodes));
  for (std::size_t j = 0; j < bc.dofs.size(); ++j) {
    int node = bc.dofs[j] / 2, comp = bc.dofs[j] % 2;
    Point x = dofs.node(node);
    double want = 0.0;
    if (comp == 0 && dofs.node_class(node) == NodeClass::Lid) want = g(x.x1, 1.0);
    CHECK(bc.values[j] == doctest::Approx(want).epsilon(1e-14));
    if (comp == 0 && x.x2 == 0.0 && x.x1 > 0.1 && x.x1 < 0.9) CHECK(bc.values[j] == 1.0);
  }
}

TEST_CASE("function boundary data") {
  Mesh m = generate_cavity_mesh(DomainPreset::unit_square(), 4);
  VelocityDofMap dofs(m);
  auto bc = dirichlet_from_function(dofs, [](const Point& x) { return Point{x.x1, 2 * x.x2}; });
  for (std::size_t j = 0; j < bc.dofs.size(); ++j) {
    Point x = dofs.node(bc.dofs[j] / 2);
    CHECK(bc.values[j] == (bc.dofs[j] % 2 == 0 ? x.x1 : 2 * x.x2));
  }
}

TEST_CASE("load vectors") {
  Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), 5);
  VelocityDofMap dofs(m);
  PointLocator loc(m);
  CompositeIntegrator integ(dofs, loc);
  SparseMatrix mass = assemble_velocity_mass(dofs);
  const double dt = 1.0 / 64;

  VelocityField zero(dofs);
  CHECK(assemble_rhs(integ, zero, dt, nullptr, 0.0).cwiseAbs().maxCoeff() == 0.0);

  VectorFunction f = [](const Point&, double t) { return Point{2.0 + t, -1.0}; };
  Vector cf = as_vector(interpolate_velocity(dofs, [](const Point&) { return Point{2.5, -1.0}; }).values());
  Vector load = assemble_rhs(integ, zero, dt, &f, 0.5);
  CHECK((load - mass * cf).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((assemble_source(dofs, f, 0.5) - mass * cf).cwiseAbs().maxCoeff() < 1e-15);

  // Zero vertex values make Pi_1 u vanish, so X_1 is the identity.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VelocityField bubble(dofs);
  for (int i = m.num_vertices(); i < dofs.num_nodes(); ++i) bubble.set_node_value(i, {u(rng), u(rng)});
  Vector r = assemble_rhs(integ, bubble, dt, nullptr, 0.0);
  Vector expect = mass * as_vector(bubble.values()) / dt;
  CHECK((r - expect).cwiseAbs().maxCoeff() <= 1e-13 * expect.cwiseAbs().maxCoeff());
}

TEST_CASE("saddle system is symmetric and eliminates Dirichlet rows") {
  Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), 4);
  VelocityDofMap vd(m);
  PressureDofMap pd(m);
  SparseMatrix k = assemble_velocity_mass(vd) * 64.0 + assemble_stiffness(vd, 1.0 / 500);
  SparseMatrix b = assemble_divergence(vd, pd);
  Vector c = mean_pressure_constraint(pd);
  SaddleSystem s = build_saddle_system(k, b, &c);
  CHECK(s.size() == vd.num_dofs() + pd.num_dofs() + 1);
  CHECK(symmetry_defect(s.matrix) < 1e-15);
  DirichletData bc = lid_driven_dirichlet(vd, LidProfile{});
  apply_dirichlet(s, bc);
  CHECK(symmetry_defect(s.matrix) < 1e-15);
  for (int d : bc.dofs) {
    CHECK(s.matrix.coeff(d, d) == 1.0);
    double off = 0.0;
    for (SparseMatrix::InnerIterator it(s.matrix, d); it; ++it)
      if (it.row() != d) off += std::fabs(it.value());
    CHECK(off == 0.0);
  }
  Vector rhs = s.rhs(Vector::Zero(vd.num_dofs()));
  for (std::size_t j = 0; j < bc.dofs.size(); ++j) CHECK(rhs[bc.dofs[j]] == bc.values[j]);
}
