#include "lgllv/mesh/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace lgllv {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> elements,
           std::vector<BoundaryEdge> boundary, std::vector<int> vertex_labels,
           std::vector<int> regions)
    : vertices_(std::move(vertices)),
      elements_(std::move(elements)),
      boundary_(std::move(boundary)),
      vertex_labels_(std::move(vertex_labels)),
      regions_(std::move(regions)) {
  if (vertices_.empty() || elements_.empty()) throw MeshError("mesh has no vertices or no elements");
  if (vertex_labels_.empty()) vertex_labels_.assign(vertices_.size(), 0);
  if (regions_.empty()) regions_.assign(elements_.size(), 0);
  if (vertex_labels_.size() != vertices_.size() || regions_.size() != elements_.size())
    throw MeshError("label array sizes do not match the mesh");

  for (const Point& p : vertices_)
    if (!std::isfinite(p.x1) || !std::isfinite(p.x2)) throw MeshError("non-finite vertex coordinate");

  const int nv = num_vertices();
  areas_.resize(elements_.size());
  bbox_ = BoundingBox::of(vertices_.data(), vertices_.data() + vertices_.size());
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    for (int v : elements_[k])
      if (v < 0 || v >= nv) throw MeshError("element " + std::to_string(k) + " has an out-of-range vertex");
    const Triangle t = triangle(static_cast<int>(k));
    areas_[k] = signed_area(t);
    if (!(areas_[k] > 0.0))
      throw MeshError("element " + std::to_string(k) + " has non-positive signed area");
    total_area_ += areas_[k];
    for (int j = 0; j < 3; ++j) h_ = std::max(h_, distance(t[j], t[(j + 1) % 3]));
  }
  build_edges();
  check_boundary();
}

Triangle Mesh::triangle(int k) const {
  const auto& e = elements_[k];
  return {vertices_[e[0]], vertices_[e[1]], vertices_[e[2]]};
}

void Mesh::build_edges() {
  std::map<std::pair<int, int>, int> index;
  element_edges_.resize(elements_.size());
  for (int k = 0; k < num_elements(); ++k) {
    for (int j = 0; j < 3; ++j) {
      int a = elements_[k][j];
      int b = elements_[k][(j + 1) % 3];
      if (a == b) throw MeshError("element " + std::to_string(k) + " is degenerate");
      auto key = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace({key.first, key.second}, num_edges());
      if (inserted) {
        edges_.push_back(Edge{{key.first, key.second}, {k, -1}, kUnlabeled});
      } else {
        Edge& e = edges_[it->second];
        if (e.elements[1] >= 0)
          throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") is shared by more than two elements");
        e.elements[1] = k;
      }
      element_edges_[k][j] = it->second;
    }
  }
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    auto [a, b] = boundary_[i].vertices;
    auto key = std::minmax(a, b);
    auto it = index.find({key.first, key.second});
    if (it == index.end() || !edges_[it->second].on_boundary())
      throw MeshError("boundary edge " + std::to_string(i) + " does not lie on the mesh boundary");
    edges_[it->second].label = boundary_[i].label;
  }
}

void Mesh::check_boundary() {
  std::vector<int> degree(vertices_.size(), 0);
  for (const Edge& e : edges_) {
    if (!e.on_boundary()) continue;
    ++degree[e.vertices[0]];
    ++degree[e.vertices[1]];
  }
  for (std::size_t v = 0; v < degree.size(); ++v)
    if (degree[v] != 0 && degree[v] != 2)
      throw MeshError("boundary is not a set of closed loops at vertex " + std::to_string(v));
}

int Mesh::neighbor(int k, int j) const {
  const Edge& e = edges_[element_edges_[k][j]];
  return e.elements[0] == k ? e.elements[1] : e.elements[0];
}

double Mesh::min_angle() const {
  double best = std::numbers::pi;
  for (int k = 0; k < num_elements(); ++k) {
    const Triangle t = triangle(k);
    for (int j = 0; j < 3; ++j) {
      Point a = t[(j + 1) % 3] - t[j];
      Point b = t[(j + 2) % 3] - t[j];
      best = std::min(best, std::atan2(std::abs(cross(a, b)), dot(a, b)));
    }
  }
  return best;
}

std::vector<std::vector<int>> Mesh::boundary_loops() const {
  // Directed boundary edges follow the owning element's orientation, which
  // traverses outer loops counter-clockwise.
  std::vector<int> next(vertices_.size(), -1);
  for (const Edge& e : edges_) {
    if (!e.on_boundary()) continue;
    const auto& el = elements_[e.elements[0]];
    for (int j = 0; j < 3; ++j) {
      int a = el[j];
      int b = el[(j + 1) % 3];
      if (std::min(a, b) == e.vertices[0] && std::max(a, b) == e.vertices[1]) next[a] = b;
    }
  }
  std::vector<std::vector<int>> loops;
  std::vector<char> seen(vertices_.size(), 0);
  for (int start = 0; start < num_vertices(); ++start) {
    if (next[start] < 0 || seen[start]) continue;
    std::vector<int> loop;
    for (int v = start; !seen[v]; v = next[v]) {
      seen[v] = 1;
      loop.push_back(v);
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::uint64_t Mesh::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const Point& p : vertices_) {
    h = fnv1a(h, std::bit_cast<std::uint64_t>(p.x1));
    h = fnv1a(h, std::bit_cast<std::uint64_t>(p.x2));
  }
  for (const auto& e : elements_)
    for (int v : e) h = fnv1a(h, static_cast<std::uint64_t>(v));
  for (const auto& b : boundary_) {
    h = fnv1a(h, static_cast<std::uint64_t>(b.vertices[0]));
    h = fnv1a(h, static_cast<std::uint64_t>(b.vertices[1]));
    h = fnv1a(h, static_cast<std::uint64_t>(b.label));
  }
  return h;
}

double loop_area(const Mesh& mesh, const std::vector<int>& loop) {
  double twice = 0.0;
  const auto& v = mesh.vertices();
  for (std::size_t i = 0; i < loop.size(); ++i)
    twice += cross(v[loop[i]], v[loop[(i + 1) % loop.size()]]);
  return 0.5 * twice;
}

}  // namespace lgllv
