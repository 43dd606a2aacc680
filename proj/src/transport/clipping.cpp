#include "lgllv/transport/clipping.hpp"

#include <algorithm>
#include <cmath>

namespace lgllv {

double ConvexPolygon::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) twice += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
  return 0.5 * twice;
}

Point ConvexPolygon::vertex_centroid() const {
  Point c{};
  for (const Point& p : vertices) c += p;
  return c * (1.0 / static_cast<double>(vertices.size()));
}

std::vector<Point> clip_halfplane(const std::vector<Point>& poly, const Point& a, const Point& b) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  const Point dir = b - a;
  auto side = [&](const Point& p) { return cross(dir, p - a); };
  double dp = side(poly[n - 1]);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[(i + n - 1) % n];
    const Point& q = poly[i];
    const double dq = side(q);
    if ((dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0)) out.push_back(p + (q - p) * (dp / (dp - dq)));
    if (dq >= 0.0) out.push_back(q);
    dp = dq;
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

std::optional<ConvexPolygon> clip_triangles(const Triangle& a, const Triangle& b) {
  std::vector<Point> poly(a.begin(), a.end());
  for (int j = 0; j < 3 && poly.size() >= 3; ++j) poly = clip_halfplane(poly, b[j], b[(j + 1) % 3]);
  if (poly.size() < 3) return std::nullopt;
  ConvexPolygon result{std::move(poly)};
  const double scale = std::min(std::abs(signed_area(a)), std::abs(signed_area(b)));
  if (!(result.area() > 1e-14 * scale)) return std::nullopt;
  return result;
}

std::vector<Triangle> triangulate_polygon(const ConvexPolygon& poly) {
  std::vector<Triangle> out;
  const std::size_t n = poly.vertices.size();
  out.reserve(n);
  const Point c = poly.vertex_centroid();
  for (std::size_t i = 0; i < n; ++i) out.push_back({c, poly.vertices[i], poly.vertices[(i + 1) % n]});
  return out;
}

}  // namespace lgllv
