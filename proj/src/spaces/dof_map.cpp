#include "lgllv/spaces/dof_map.hpp"

namespace lgllv {

namespace {

NodeClass class_of_label(int label) {
  switch (label) {
    case kWall: return NodeClass::Wall;
    case kLid: return NodeClass::Lid;
    default: return NodeClass::Unlabeled;
  }
}

/// Wall dominates lid, and any labeled class dominates an unlabeled one.
int rank(NodeClass c) {
  switch (c) {
    case NodeClass::Interior: return 0;
    case NodeClass::Unlabeled: return 1;
    case NodeClass::Lid: return 2;
    case NodeClass::Wall: return 3;
  }
  return 0;
}

}  // namespace

VelocityDofMap::VelocityDofMap(const Mesh& mesh) : mesh_(&mesh) {
  const int nv = mesh.num_vertices();
  nodes_ = mesh.vertices();
  nodes_.reserve(nv + mesh.num_edges());
  for (const Edge& e : mesh.edges()) nodes_.push_back((mesh.vertices()[e.vertices[0]] + mesh.vertices()[e.vertices[1]]) * 0.5);

  element_nodes_.resize(mesh.num_elements());
  bary_.resize(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& el = mesh.elements()[k];
    const auto& ed = mesh.element_edges(k);
    element_nodes_[k] = {el[0], el[1], el[2], nv + ed[0], nv + ed[1], nv + ed[2]};
    bary_[k] = barycentric_map(mesh.triangle(k));
  }

  classes_.assign(nodes_.size(), NodeClass::Interior);
  auto promote = [&](int node, NodeClass c) {
    if (rank(c) > rank(classes_[node])) classes_[node] = c;
  };
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const Edge& e = mesh.edges()[i];
    if (!e.on_boundary()) continue;
    const NodeClass c = class_of_label(e.label);
    promote(nv + i, c);
    promote(e.vertices[0], c);
    promote(e.vertices[1], c);
  }
}

}  // namespace lgllv
