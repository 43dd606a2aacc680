#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lgllv/mesh/cavity_mesh.hpp"
#include "lgllv/postprocess/postprocess.hpp"

using namespace lgllv;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lgllv_test_post_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ScalarP2Field scalar_field(const VelocityDofMap& dofs, const std::function<double(const Point&)>& f) {
  ScalarP2Field s{&dofs, {}};
  for (const Point& x : dofs.nodes()) s.values.push_back(f(x));
  return s;
}

struct VtkSummary {
  int points = -1, cells = -1, cell_types = -1, point_data = -1;
  std::vector<int> types;
  std::vector<std::string> arrays;
};

// Minimal legacy-VTK reader: checks the section sizes are consistent.
VtkSummary read_vtk(const fs::path& path) {
  std::ifstream in(path);
  VtkSummary s;
  std::string line;
  REQUIRE(static_cast<bool>(std::getline(in, line)));
  CHECK(line.rfind("# vtk DataFile", 0) == 0);
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "ASCII");
  std::getline(in, line);
  CHECK(line == "DATASET UNSTRUCTURED_GRID");
  std::string key;
  while (in >> key) {
    if (key == "POINTS") {
      std::string type;
      in >> s.points >> type;
      for (int i = 0; i < 3 * s.points; ++i) {
        double v;
        REQUIRE(static_cast<bool>(in >> v));
      }
    } else if (key == "CELLS") {
      int total;
      in >> s.cells >> total;
      int read = 0;
      for (int c = 0; c < s.cells; ++c) {
        int n;
        in >> n;
        read += n + 1;
        for (int j = 0; j < n; ++j) {
          int id;
          in >> id;
          CHECK(id >= 0);
          CHECK(id < s.points);
        }
      }
      CHECK(read == total);
    } else if (key == "CELL_TYPES") {
      in >> s.cell_types;
      s.types.resize(s.cell_types);
      for (int& t : s.types) in >> t;
    } else if (key == "POINT_DATA") {
      in >> s.point_data;
    } else if (key == "VECTORS" || key == "SCALARS") {
      std::string name, type;
      in >> name >> type;
      int comps = 3;
      if (key == "SCALARS") {
        std::string rest;
        in >> comps >> rest >> rest;  // "1 LOOKUP_TABLE default"
      }
      s.arrays.push_back(name);
      for (int i = 0; i < comps * s.point_data; ++i) {
        double v;
        REQUIRE(static_cast<bool>(in >> v));
      }
    } else {
      FAIL("unexpected VTK keyword " << key);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("zero velocity has zero vorticity and stream function") {
  Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), 6);
  VelocityDofMap dofs(m);
  VelocityField u(dofs);
  for (double v : compute_vorticity(u).values) CHECK(v == 0.0);
  for (double v : compute_stream_function(u).values) CHECK(v == 0.0);
}

TEST_CASE("rigid rotation has vorticity 2") {
  Mesh m = generate_cavity_mesh(DomainPreset::unit_square(), 6);
  VelocityDofMap dofs(m);
  auto u = interpolate_velocity(dofs, [](const Point& x) { return Point{-(x.x2 - 0.5), x.x1 - 0.5}; });
  for (double v : compute_vorticity(u).values) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  // Boundary values of psi are exactly zero, whatever the trace of u.
  auto psi = compute_stream_function(u);
  for (int i = 0; i < dofs.num_nodes(); ++i)
    if (dofs.node_class(i) != NodeClass::Interior) CHECK(psi.values[i] == 0.0);
}

TEST_CASE("stream function of a cubic bubble is nodally exact") {
  // psi = l1 l2 l3 (product of the barycentric coordinates of the domain)
  // vanishes on the boundary; u = (dpsi/dx2, -dpsi/dx1) is quadratic.
  auto errors_on = [](int n) {
    const auto dom = DomainPreset::equilateral();
    Mesh m = generate_cavity_mesh(dom, n);
    VelocityDofMap dofs(m);
    Triangle t{dom.corners[0], dom.corners[1], dom.corners[2]};
    auto bm = barycentric_map(t);
    auto psi_exact = [&](const Point& x) {
      auto l = bm(x);
      return l[0] * l[1] * l[2];
    };
    auto u = interpolate_velocity(dofs, [&](const Point& x) {
      auto l = bm(x);
      Point g = l[1] * l[2] * bm.g[0] + l[0] * l[2] * bm.g[1] + l[0] * l[1] * bm.g[2];
      return Point{g.x2, -g.x1};
    });
    auto psi = compute_stream_function(u);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < dofs.num_nodes(); ++i) {
      err = std::max(err, std::fabs(psi.values[i] - psi_exact(dofs.node(i))));
      scale = std::max(scale, std::fabs(psi_exact(dofs.node(i))));
    }
    return err / scale;
  };
  // psi_h is the Ritz projection of the cubic psi, which on these uniform
  // meshes matches psi at the nodes.
  CHECK(errors_on(8) < 1e-12);
  CHECK(errors_on(16) < 1e-12);
}

TEST_CASE("contours of simple fields") {
  Mesh m = generate_cavity_mesh(DomainPreset::unit_square(), 8);
  VelocityDofMap dofs(m);
  auto constant = scalar_field(dofs, [](const Point&) { return 0.3; });
  CHECK(extract_contours(constant, {0.1, 0.5, -2.0}).empty());

  auto lin = scalar_field(dofs, [](const Point& x) { return x.x1; });
  auto c = extract_contours(lin, {0.53});
  REQUIRE(c.size() == 1);
  CHECK_FALSE(c[0].closed);
  CHECK(c[0].level == 0.53);
  double lo = 1.0, hi = 0.0;
  for (const Point& p : c[0].points) {
    CHECK(p.x1 == doctest::Approx(0.53).epsilon(1e-12));
    lo = std::min(lo, p.x2);
    hi = std::max(hi, p.x2);
  }
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(1.0));

  // Concentric circles of a radial field are closed loops around the center.
  auto radial = scalar_field(dofs, [](const Point& x) { return std::hypot(x.x1 - 0.5, x.x2 - 0.5); });
  auto rings = extract_contours(radial, {0.2, 0.3});
  REQUIRE(rings.size() == 2);
  for (const auto& r : rings) {
    CHECK(r.closed);
    CHECK(polygon_contains(r.points, {0.5, 0.5}));
    CHECK(std::fabs(polygon_area(r.points)) == doctest::Approx(std::numbers::pi * r.level * r.level).epsilon(0.02));
  }
  const Contour* big = largest_closed_contour(rings);
  REQUIRE(big);
  CHECK(big->level == 0.3);
  CHECK(largest_closed_contour(c) == nullptr);
}

TEST_CASE("default contour levels") {
  Mesh m = generate_cavity_mesh(DomainPreset::unit_square(), 4);
  VelocityDofMap dofs(m);
  auto f = scalar_field(dofs, [](const Point& x) { return x.x1 - 0.25; });  // in [-0.25, 0.75]
  auto levels = default_contour_levels(f, 5, 4.0);
  CHECK(levels.size() == 10);
  CHECK(*std::max_element(levels.begin(), levels.end()) == doctest::Approx(0.98 * 0.75));
  CHECK(*std::min_element(levels.begin(), levels.end()) == doctest::Approx(-0.98 * 0.25));
  auto positive = scalar_field(dofs, [](const Point& x) { return 1.0 + x.x1; });
  CHECK(default_contour_levels(positive, 5, 4.0).size() == 5);
}

TEST_CASE("polygon helpers") {
  std::vector<Point> sq{{0, 0}, {2, 0}, {2, 1}, {0, 1}};
  CHECK(polygon_area(sq) == doctest::Approx(2.0));
  CHECK(polygon_contains(sq, {1.0, 0.5}));
  CHECK_FALSE(polygon_contains(sq, {2.5, 0.5}));
}

TEST_CASE("stagnation finder") {
  const int n = 8;
  const auto dom = DomainPreset::equilateral();
  Mesh m = generate_cavity_mesh(dom, n);
  VelocityDofMap dofs(m);
  const Segment side = dom.left_side();

  VelocityField zero(dofs);
  CHECK_FALSE(find_stagnation_point(zero, side, 100, Branch::Star));

  // psi changes sign between the 3rd and 4th vertex along the side.
  const Point d = side.end - side.start;
  auto psi = scalar_field(dofs, [&](const Point& x) { return dot(x - side.start, d) / dot(d, d) - 3.5 / n; });
  auto r = find_stagnation_point(psi, side, 1550, Branch::DoubleStar);
  REQUIRE(r);
  CHECK(distance(r->x, side.start + d * (4.0 / n)) < 1e-12);
  CHECK(distance(m.vertices()[r->node], r->x) == 0.0);
  CHECK(r->re == 1550);
  CHECK(r->branch == Branch::DoubleStar);

  // Deterministic and invariant under scaling of the field.
  auto u = interpolate_velocity(dofs, [](const Point& x) {
    return Point{std::sin(6 * x.x2) * (x.x1 + 0.3), std::cos(5 * x.x1) * x.x2};
  });
  auto base = find_stagnation_point(u, side, 1000, Branch::Star);
  CHECK(find_stagnation_point(u, side, 1000, Branch::Star) == base);
  for (double k : {1e-6, 3.0, 1e4, -2.5}) {
    VelocityField scaled = u;
    for (double& v : scaled.values()) v *= k;
    CHECK(find_stagnation_point(scaled, side, 1000, Branch::Star) == base);
  }
}

TEST_CASE("branch names") {
  CHECK(branch_name(Branch::Star) == "star");
  CHECK(branch_name(Branch::DoubleStar) == "double_star");
  CHECK(parse_branch("star") == Branch::Star);
  CHECK(parse_branch("double_star") == Branch::DoubleStar);
  CHECK_THROWS(parse_branch("triple"));
}

TEST_CASE("VTK export") {
  auto dir = scratch_dir("vtk");
  Mesh m = generate_cavity_mesh(DomainPreset::equilateral(), 3);
  VelocityDofMap dofs(m);
  PressureDofMap pdofs(m);
  VelocityField u(dofs);
  PressureField p(pdofs);
  export_vtk((dir / "zero.vtk").string(), dofs, &u, &p);
  auto s = read_vtk(dir / "zero.vtk");
  CHECK(s.points == dofs.num_nodes());
  CHECK(s.cells == m.num_elements());
  CHECK(s.cell_types == m.num_elements());
  for (int t : s.types) CHECK(t == 22);
  CHECK(s.point_data == dofs.num_nodes());
  CHECK(s.arrays == std::vector<std::string>{"velocity", "pressure"});

  auto psi = compute_stream_function(u);
  export_vtk((dir / "lin.vtk").string(), dofs, nullptr, nullptr, {{"psi", &psi}}, {.linear_subdivision = true});
  auto l = read_vtk(dir / "lin.vtk");
  CHECK(l.cells == 4 * m.num_elements());
  for (int t : l.types) CHECK(t == 5);
  CHECK(l.arrays == std::vector<std::string>{"psi"});
}

TEST_CASE("SVG export") {
  auto dir = scratch_dir("svg");
  Mesh m = generate_cavity_mesh(DomainPreset::unit_square(), 8);
  VelocityDofMap dofs(m);
  auto radial = scalar_field(dofs, [](const Point& x) { return std::hypot(x.x1 - 0.5, x.x2 - 0.5); });
  auto contours = extract_contours(radial, {0.1, 0.2, 0.3, 0.4});
  export_svg((dir / "c.svg").string(), m, contours);
  std::ifstream in(dir / "c.svg");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  std::size_t count = 0;
  for (std::size_t pos = text.find("<polyline"); pos != std::string::npos; pos = text.find("<polyline", pos + 1))
    ++count;
  CHECK(count == contours.size());
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("</svg>") != std::string::npos);
}

TEST_CASE("stagnation CSV round trip") {
  auto dir = scratch_dir("csv");
  std::vector<StagnationResult> series{{12, {0.1, -0.17320508075688773}, 1500, Branch::Star},
                                       {13, {0.125, -0.21650635094610965}, 1550, Branch::DoubleStar},
                                       {40, {1.0 / 3, -1e-17}, 1600.5, Branch::Star}};
  auto path = (dir / "s.csv").string();
  export_stagnation_csv(path, series);
  CHECK(read_stagnation_csv(path) == series);
  export_stagnation_csv(path, {});
  CHECK(read_stagnation_csv(path).empty());
}

TEST_CASE("Reynolds number rescaling") {
  CHECK(reynolds_rescale(2000, DomainKind::Equilateral) == doctest::Approx(577.35).epsilon(1e-5));
  CHECK(reynolds_rescale(400, DomainKind::Isosceles) == 200.0);
  CHECK(reynolds_rescale(0, DomainKind::Equilateral) == 0.0);
  CHECK(reynolds_rescale(0, DomainKind::Isosceles) == 0.0);
  CHECK_THROWS_AS(reynolds_rescale(100, DomainKind::UnitSquare), std::invalid_argument);
}
