#pragma once

#include <optional>
#include <vector>

#include "lgllv/mesh/point.hpp"

namespace lgllv {

/// Convex polygon with counter-clockwise vertices.
struct ConvexPolygon {
  std::vector<Point> vertices;

  double area() const;
  Point vertex_centroid() const;
};

/// Keeps the part of `poly` on the left of the directed line a -> b
/// (Sutherland-Hodgman step). Vertices on the line are kept.
std::vector<Point> clip_halfplane(const std::vector<Point>& poly, const Point& a, const Point& b);

/// Intersection of two counter-clockwise triangles; nullopt when the
/// interiors are disjoint (including touching along an edge or vertex).
std::optional<ConvexPolygon> clip_triangles(const Triangle& a, const Triangle& b);

/// Centroid-fan triangulation: one triangle per polygon edge.
std::vector<Triangle> triangulate_polygon(const ConvexPolygon& poly);

}  // namespace lgllv
