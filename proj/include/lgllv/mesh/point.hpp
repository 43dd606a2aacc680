#pragma once

#include <array>
#include <cmath>

namespace lgllv {

/// A point (or vector) in the plane.
struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Point& operator+=(const Point& o) {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  constexpr Point& operator-=(const Point& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  constexpr Point& operator*=(double s) {
    x1 *= s;
    x2 *= s;
    return *this;
  }
  friend constexpr bool operator==(const Point&, const Point&) = default;
};

constexpr Point operator+(Point a, const Point& b) { return a += b; }
constexpr Point operator-(Point a, const Point& b) { return a -= b; }
constexpr Point operator-(const Point& a) { return {-a.x1, -a.x2}; }
constexpr Point operator*(Point a, double s) { return a *= s; }
constexpr Point operator*(double s, Point a) { return a *= s; }

constexpr double dot(const Point& a, const Point& b) { return a.x1 * b.x1 + a.x2 * b.x2; }
constexpr double cross(const Point& a, const Point& b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(const Point& a) { return std::hypot(a.x1, a.x2); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
constexpr double orient2d(const Point& a, const Point& b, const Point& c) {
  return cross(b - a, c - a);
}

constexpr double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * orient2d(a, b, c);
}

using Triangle = std::array<Point, 3>;

constexpr double signed_area(const Triangle& t) { return signed_area(t[0], t[1], t[2]); }

constexpr Point centroid(const Triangle& t) {
  return {(t[0].x1 + t[1].x1 + t[2].x1) / 3.0, (t[0].x2 + t[1].x2 + t[2].x2) / 3.0};
}

/// Point with barycentric coordinates `bary` in `t`.
constexpr Point from_barycentric(const Triangle& t, const std::array<double, 3>& bary) {
  return {bary[0] * t[0].x1 + bary[1] * t[1].x1 + bary[2] * t[2].x1,
          bary[0] * t[0].x2 + bary[1] * t[1].x2 + bary[2] * t[2].x2};
}

/// Axis-aligned bounding box.
struct BoundingBox {
  Point lo{};
  Point hi{};

  static BoundingBox of(const Point* first, const Point* last) {
    BoundingBox b{*first, *first};
    for (const Point* p = first + 1; p != last; ++p) b.expand(*p);
    return b;
  }
  void expand(const Point& p) {
    lo.x1 = std::fmin(lo.x1, p.x1);
    lo.x2 = std::fmin(lo.x2, p.x2);
    hi.x1 = std::fmax(hi.x1, p.x1);
    hi.x2 = std::fmax(hi.x2, p.x2);
  }
  bool overlaps(const BoundingBox& o) const {
    return lo.x1 <= o.hi.x1 && o.lo.x1 <= hi.x1 && lo.x2 <= o.hi.x2 && o.lo.x2 <= hi.x2;
  }
  double diagonal() const { return distance(lo, hi); }
};

}  // namespace lgllv
