#pragma once

#include <array>
#include <string>

#include "lgllv/mesh/mesh.hpp"

namespace lgllv {

enum class DomainKind { Equilateral, Isosceles, Triangle, UnitSquare };

/// A straight boundary segment, used to designate a side of the domain.
struct Segment {
  Point start;
  Point end;
};

/// Triangular cavity geometry. For the triangle presets `corners[0]` and
/// `corners[1]` are the lid endpoints and `corners[2]` is the apex.
struct DomainPreset {
  DomainKind kind = DomainKind::Equilateral;
  std::array<Point, 3> corners{};

  /// Unit side length, lid on x2 = 0 from (0,0) to (1,0), apex at (1/2, -sqrt(3)/2).
  static DomainPreset equilateral();
  /// Lid on x2 = 0 from (0,0) to (base,0), apex at (base/2, -height).
  /// The default dimensions are a guess; the geometry is not published.
  static DomainPreset isosceles(double base = 1.0, double height = 2.0);
  static DomainPreset triangle(Point lid_start, Point lid_end, Point apex);
  /// (0,1)^2 with the lid on x2 = 1.
  static DomainPreset unit_square();

  std::string name() const;
  /// Wall from the lid start to the apex (the "left side" of the cavity).
  Segment left_side() const;
  Point centroid() const;
};

/// Structured conforming triangulation with `n` segments per side. Triangle
/// presets give n^2 elements and (n+1)(n+2)/2 vertices; the unit square gives
/// 2n^2 elements. Lid edges are labeled kLid, all others kWall.
/// Throws std::invalid_argument if n < 2.
Mesh generate_cavity_mesh(const DomainPreset& domain, int n);

}  // namespace lgllv
