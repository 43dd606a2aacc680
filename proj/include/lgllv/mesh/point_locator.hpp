#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lgllv/mesh/mesh.hpp"

namespace lgllv {

struct Location {
  int element = -1;
  std::array<double, 3> bary{};
};

/// Affine barycentric coordinate functions of one element:
/// lambda_i(x) = c[i] + g[i] . x.
struct BarycentricMap {
  std::array<double, 3> c{};
  std::array<Point, 3> g{};

  std::array<double, 3> operator()(const Point& p) const {
    return {c[0] + dot(g[0], p), c[1] + dot(g[1], p), c[2] + dot(g[2], p)};
  }
};

BarycentricMap barycentric_map(const Triangle& t);

/// Point location on a fixed mesh via a uniform bucket grid (cell size about
/// 2h). Points on shared edges or vertices resolve to the lowest element id.
/// The mesh must outlive the locator. Read-only after construction.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  /// Geometric tolerance, 1e-10 times the domain diameter.
  double tolerance() const { return eps_; }

  /// Element containing `p` (within tolerance) or nullopt when outside.
  /// A hint element is accepted only when `p` is strictly inside it.
  std::optional<Location> locate(const Point& p, int hint = -1) const;

  /// Elements whose bounding box overlaps `box`, ascending and unique.
  void candidates(const BoundingBox& box, std::vector<int>& out) const;

  const BarycentricMap& barycentric(int k) const { return bary_[k]; }
  /// True when all barycentric coordinates of the point are >= -tolerance in
  /// distance units.
  bool contains(int k, const std::array<double, 3>& lambda) const;
  /// Smallest signed distance from the point to the element's edge lines.
  double inside_margin(int k, const std::array<double, 3>& lambda) const;

 private:
  int cell_index(int i, int j) const { return j * nx_ + i; }
  std::pair<int, int> cell_of(const Point& p) const;

  const Mesh* mesh_;
  double eps_;
  std::vector<BarycentricMap> bary_;
  std::vector<std::array<double, 3>> grad_norm_;
  std::vector<BoundingBox> boxes_;
  Point origin_{};
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<int> bucket_start_;
  std::vector<int> bucket_items_;
};

/// Straight-line visibility walk from `start`, crossing the edge with the most
/// negative barycentric coordinate. Returns nullopt when the walk exits the
/// mesh. Unlike PointLocator::locate there is no lowest-id tie-break.
std::optional<Location> locate_by_walk(const PointLocator& locator, const Point& p, int start);

}  // namespace lgllv
