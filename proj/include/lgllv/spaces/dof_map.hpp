#pragma once

#include <array>
#include <vector>

#include "lgllv/mesh/mesh.hpp"
#include "lgllv/mesh/point_locator.hpp"

namespace lgllv {

enum class NodeClass { Interior, Wall, Lid, Unlabeled };

/// Continuous P2 vector space: nodes are the mesh vertices followed by the
/// edge midpoints, and velocity dofs are component-interleaved per node
/// (dof 2*node + component).
///
/// Local node order on an element: vertices 0, 1, 2, then the midpoints of
/// local edges (0,1), (1,2), (2,0).
class VelocityDofMap {
 public:
  explicit VelocityDofMap(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_dofs() const { return 2 * num_nodes(); }
  static constexpr int dof(int node, int component) { return 2 * node + component; }

  const std::array<int, 6>& element_nodes(int k) const { return element_nodes_[k]; }
  const Point& node(int i) const { return nodes_[i]; }
  const std::vector<Point>& nodes() const { return nodes_; }
  /// Boundary classification; a node touching any wall edge is Wall.
  NodeClass node_class(int i) const { return classes_[i]; }
  bool is_vertex_node(int i) const { return i < mesh_->num_vertices(); }
  /// Cached barycentric coordinate functions of element k.
  const BarycentricMap& barycentric(int k) const { return bary_[k]; }

 private:
  const Mesh* mesh_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 6>> element_nodes_;
  std::vector<NodeClass> classes_;
  std::vector<BarycentricMap> bary_;
};

/// Continuous P1 scalar space on the mesh vertices.
class PressureDofMap {
 public:
  explicit PressureDofMap(const Mesh& mesh) : mesh_(&mesh) {}

  const Mesh& mesh() const { return *mesh_; }
  int num_dofs() const { return mesh_->num_vertices(); }
  const std::array<int, 3>& element_dofs(int k) const { return mesh_->elements()[k]; }

 private:
  const Mesh* mesh_;
};

}  // namespace lgllv
