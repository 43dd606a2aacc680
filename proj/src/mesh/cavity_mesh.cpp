#include "lgllv/mesh/cavity_mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lgllv {

DomainPreset DomainPreset::equilateral() {
  return {DomainKind::Equilateral, {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.5, -std::sqrt(3.0) / 2.0}}};
}

DomainPreset DomainPreset::isosceles(double base, double height) {
  if (!(base > 0.0) || !(height > 0.0)) throw std::invalid_argument("isosceles preset needs positive base and height");
  return {DomainKind::Isosceles, {Point{0.0, 0.0}, Point{base, 0.0}, Point{0.5 * base, -height}}};
}

DomainPreset DomainPreset::triangle(Point lid_start, Point lid_end, Point apex) {
  if (orient2d(lid_start, lid_end, apex) == 0.0) throw std::invalid_argument("triangle preset is degenerate");
  return {DomainKind::Triangle, {lid_start, lid_end, apex}};
}

DomainPreset DomainPreset::unit_square() {
  return {DomainKind::UnitSquare, {Point{0.0, 1.0}, Point{1.0, 1.0}, Point{0.0, 0.0}}};
}

std::string DomainPreset::name() const {
  switch (kind) {
    case DomainKind::Equilateral: return "equilateral";
    case DomainKind::Isosceles: return "isosceles";
    case DomainKind::Triangle: return "triangle";
    case DomainKind::UnitSquare: return "square";
  }
  return "unknown";
}

Segment DomainPreset::left_side() const {
  if (kind == DomainKind::UnitSquare) return {Point{0.0, 1.0}, Point{0.0, 0.0}};
  return {corners[0], corners[2]};
}

Point DomainPreset::centroid() const {
  if (kind == DomainKind::UnitSquare) return {0.5, 0.5};
  return lgllv::centroid(Triangle{corners[0], corners[1], corners[2]});
}

namespace {

Mesh triangle_mesh(const DomainPreset& d, int n) {
  const Point lid0 = d.corners[0];
  const Point lid1 = d.corners[1];
  const Point apex = d.corners[2];
  const bool flip = orient2d(lid0, lid1, apex) < 0.0;

  // Row j holds the lattice points (i, j), i = 0..n-j.
  std::vector<int> row_offset(n + 2, 0);
  for (int j = 0; j <= n; ++j) row_offset[j + 1] = row_offset[j] + (n - j + 1);
  auto id = [&](int i, int j) { return row_offset[j] + i; };

  std::vector<Point> vertices;
  vertices.reserve(row_offset[n + 1]);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n - j; ++i) {
      if (j == n) {
        vertices.push_back(apex);
      } else if (i + j == n) {
        // Exactly on the lid_end-apex side.
        const double t = static_cast<double>(j) / n;
        vertices.push_back(lid1 + t * (apex - lid1));
      } else {
        const double s = static_cast<double>(i) / n;
        const double t = static_cast<double>(j) / n;
        vertices.push_back(lid0 + s * (lid1 - lid0) + t * (apex - lid0));
      }
    }
  }

  std::vector<std::array<int, 3>> elements;
  elements.reserve(static_cast<std::size_t>(n) * n);
  auto add = [&](int a, int b, int c) {
    if (flip) std::swap(b, c);
    elements.push_back({a, b, c});
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n - j; ++i) {
      add(id(i, j), id(i + 1, j), id(i, j + 1));
      if (i + j < n - 1) add(id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
    }
  }

  std::vector<BoundaryEdge> boundary;
  auto add_edge = [&](int a, int b, int label) {
    if (flip) std::swap(a, b);
    boundary.push_back({{a, b}, label});
  };
  for (int i = 0; i < n; ++i) add_edge(id(i, 0), id(i + 1, 0), kLid);
  for (int j = 0; j < n; ++j) add_edge(id(n - j, j), id(n - j - 1, j + 1), kWall);
  for (int j = n; j > 0; --j) add_edge(id(0, j), id(0, j - 1), kWall);

  std::vector<int> vertex_labels(vertices.size(), 0);
  for (const auto& e : boundary)
    for (int v : e.vertices)
      if (vertex_labels[v] != kWall) vertex_labels[v] = e.label;
  return Mesh(std::move(vertices), std::move(elements), std::move(boundary), std::move(vertex_labels));
}

Mesh square_mesh(int n) {
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<Point> vertices;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  std::vector<std::array<int, 3>> elements;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  std::vector<BoundaryEdge> boundary;
  for (int i = 0; i < n; ++i) boundary.push_back({{id(i, 0), id(i + 1, 0)}, kWall});
  for (int j = 0; j < n; ++j) boundary.push_back({{id(n, j), id(n, j + 1)}, kWall});
  for (int i = n; i > 0; --i) boundary.push_back({{id(i, n), id(i - 1, n)}, kLid});
  for (int j = n; j > 0; --j) boundary.push_back({{id(0, j), id(0, j - 1)}, kWall});
  std::vector<int> vertex_labels(vertices.size(), 0);
  for (const auto& e : boundary)
    for (int v : e.vertices)
      if (vertex_labels[v] != kWall) vertex_labels[v] = e.label;
  return Mesh(std::move(vertices), std::move(elements), std::move(boundary), std::move(vertex_labels));
}

}  // namespace

Mesh generate_cavity_mesh(const DomainPreset& domain, int n) {
  if (n < 2) throw std::invalid_argument("invalid resolution: need at least 2 segments per side, got " + std::to_string(n));
  if (domain.kind == DomainKind::UnitSquare) return square_mesh(n);
  return triangle_mesh(domain, n);
}

}  // namespace lgllv
