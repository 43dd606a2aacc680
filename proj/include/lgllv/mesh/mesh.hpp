#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgllv/mesh/point.hpp"

namespace lgllv {

/// Boundary edge labels used by the exchange format.
enum BoundaryLabel : int { kUnlabeled = 0, kWall = 1, kLid = 2 };

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundaryEdge {
  std::array<int, 2> vertices{};
  int label = kWall;
};

/// Unique undirected edge with its (at most two) adjacent elements.
/// `elements[1] == -1` marks a boundary edge.
struct Edge {
  std::array<int, 2> vertices{};  // sorted ascending
  std::array<int, 2> elements{-1, -1};
  int label = kUnlabeled;  // boundary label, kUnlabeled for interior edges

  bool on_boundary() const { return elements[1] < 0; }
};

/// Conforming triangulation of a polygonal domain.
///
/// Elements are counter-clockwise vertex triples. Local edge j of an element
/// joins local vertices j and (j+1)%3. Immutable after construction.
class Mesh {
 public:
  Mesh() = default;

  /// Validates the input and builds the edge table. Throws MeshError on
  /// non-positive element areas, non-manifold edges, listed boundary edges
  /// that are not on the topological boundary, and open boundary loops.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> elements,
       std::vector<BoundaryEdge> boundary, std::vector<int> vertex_labels = {},
       std::vector<int> regions = {});

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& elements() const { return elements_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& vertex_labels() const { return vertex_labels_; }
  const std::vector<int>& regions() const { return regions_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Global edge ids of the three local edges (0,1), (1,2), (2,0).
  const std::array<int, 3>& element_edges(int k) const { return element_edges_[k]; }
  /// Neighbor across local edge j, or -1 on the boundary.
  int neighbor(int k, int j) const;

  Triangle triangle(int k) const;
  double area(int k) const { return areas_[k]; }
  double total_area() const { return total_area_; }
  /// Maximum element diameter.
  double h() const { return h_; }
  /// Smallest interior angle over all elements, in radians.
  double min_angle() const;
  const BoundingBox& bounding_box() const { return bbox_; }
  double diameter() const { return bbox_.diagonal(); }

  /// Boundary vertex loops, each ordered counter-clockwise.
  std::vector<std::vector<int>> boundary_loops() const;

  /// FNV-1a hash over coordinates, connectivity and labels.
  std::uint64_t hash() const;

 private:
  void build_edges();
  void check_boundary();

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<int> vertex_labels_;
  std::vector<int> regions_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<double> areas_;
  double total_area_ = 0.0;
  double h_ = 0.0;
  BoundingBox bbox_{};
};

/// Polygon area of a closed vertex loop (shoelace formula).
double loop_area(const Mesh& mesh, const std::vector<int>& loop);

}  // namespace lgllv
