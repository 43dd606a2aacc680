#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "lgllv/spaces/fields.hpp"
#include "lgllv/transport/characteristics.hpp"
#include "oracles.hpp"

namespace oracle {

inline P to_p(const lgllv::Point& p) { return {p.x1, p.x2}; }

/// u_prev at y by scanning every element; throws when y is outside the mesh.
inline std::array<double, 2> eval_by_scan(const lgllv::VelocityField& u, const P& y) {
  const auto& mesh = u.dof_map().mesh();
  for (int k = 0; k < mesh.num_elements(); ++k) {
    auto t = mesh.triangle(k);
    auto l = barycentric(to_p(t[0]), to_p(t[1]), to_p(t[2]), y);
    if (l[0] < -1e-13 || l[1] < -1e-13 || l[2] < -1e-13) continue;
    auto phi = p2_basis(l);
    auto c = u.local(k);
    std::array<double, 2> v{};
    for (int a = 0; a < 6; ++a) {
      v[0] += c[2 * a] * phi[a];
      v[1] += c[2 * a + 1] * phi[a];
    }
    return v;
  }
  throw std::runtime_error("oracle: point outside the mesh");
}

/// integral over K of (u_prev o map) phi_i for the 12 local basis functions.
/// K is cut along the preimage of every mesh edge line, so the integrand is a
/// polynomial of degree 4 on each piece and a 4-point tensor rule is exact.
inline std::array<double, 12> composite_by_split(const lgllv::VelocityField& u_prev, int element,
                                                 const lgllv::AffineMap& map) {
  const auto& mesh = u_prev.dof_map().mesh();
  const auto t = mesh.triangle(element);
  std::array<P, 3> tri{to_p(t[0]), to_p(t[1]), to_p(t[2])};
  std::vector<std::vector<P>> pieces{{tri[0], tri[1], tri[2]}};
  for (const auto& e : mesh.edges()) {
    P a = to_p(mesh.vertices()[e.vertices[0]]), b = to_p(mesh.vertices()[e.vertices[1]]);
    // Side of the image point relative to the edge line.
    auto g = [&](const P& x) {
      auto y = map.apply({x.x, x.y});
      return (b.x - a.x) * (y.x2 - a.y) - (b.y - a.y) * (y.x1 - a.x);
    };
    std::vector<std::vector<P>> next;
    for (const auto& piece : pieces)
      for (auto& side : split_polygon(piece, g))
        if (side.size() >= 3) next.push_back(std::move(side));
    pieces = std::move(next);
  }
  std::array<double, 12> r{};
  for (const auto& piece : pieces) {
    for (std::size_t j = 1; j + 1 < piece.size(); ++j) {
      for_each_triangle_point(piece[0], piece[j], piece[j + 1], 4, [&](const P& x, double w) {
        auto y = map.apply({x.x, x.y});
        auto v = eval_by_scan(u_prev, to_p(y));
        auto phi = p2_basis(barycentric(tri[0], tri[1], tri[2], x));
        for (int a = 0; a < 6; ++a) {
          r[2 * a] += w * v[0] * phi[a];
          r[2 * a + 1] += w * v[1] * phi[a];
        }
      });
    }
  }
  return r;
}

/// Same integral by adaptive sweep-line quadrature: adaptive Gauss in x1
/// over K, adaptive Gauss in x2 on each vertical line. The integrand is only
/// piecewise smooth, so both sweeps are cut where a preimage of a mesh edge
/// line crosses the line of integration or another such line.
inline std::array<double, 12> composite_by_sweep(const lgllv::VelocityField& u_prev, int element,
                                                 const lgllv::AffineMap& map, double tol = 1e-15) {
  const auto& mesh = u_prev.dof_map().mesh();
  const auto t = mesh.triangle(element);
  std::array<P, 3> tri{to_p(t[0]), to_p(t[1]), to_p(t[2])};

  // Preimage of each edge line as c0 + c1 x + c2 y = 0.
  struct Line {
    double c0, c1, c2;
  };
  std::vector<Line> lines;
  auto side = [&](P a, P b, P x) {
    auto y = map.apply({x.x, x.y});
    return (b.x - a.x) * (y.x2 - a.y) - (b.y - a.y) * (y.x1 - a.x);
  };
  for (const auto& e : mesh.edges()) {
    P a = to_p(mesh.vertices()[e.vertices[0]]), b = to_p(mesh.vertices()[e.vertices[1]]);
    double c0 = side(a, b, {0, 0});
    lines.push_back({c0, side(a, b, {1, 0}) - c0, side(a, b, {0, 1}) - c0});
  }
  // K's own sides, so crossings with them become outer breaks too.
  for (int i = 0; i < 3; ++i) {
    P a = tri[i], b = tri[(i + 1) % 3];
    lines.push_back({a.x * b.y - a.y * b.x, a.y - b.y, b.x - a.x});
  }

  std::vector<double> x_breaks;
  for (const auto& v : tri) x_breaks.push_back(v.x);
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      double det = lines[i].c1 * lines[j].c2 - lines[i].c2 * lines[j].c1;
      if (std::fabs(det) < 1e-300) continue;
      x_breaks.push_back((lines[i].c2 * lines[j].c0 - lines[i].c0 * lines[j].c2) / det);
    }

  auto integrand = [&](P x) {
    auto y = map.apply({x.x, x.y});
    auto v = eval_by_scan(u_prev, to_p(y));
    auto phi = p2_basis(barycentric(tri[0], tri[1], tri[2], x));
    std::array<double, 12> r{};
    for (int a = 0; a < 6; ++a) {
      r[2 * a] = v[0] * phi[a];
      r[2 * a + 1] = v[1] * phi[a];
    }
    return r;
  };

  // Vertical extent of K at x.
  auto y_range = [&](double x) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 3; ++i) {
      P a = tri[i], b = tri[(i + 1) % 3];
      if (a.x == b.x) {
        if (x == a.x) lo = std::fmin(lo, std::fmin(a.y, b.y)), hi = std::fmax(hi, std::fmax(a.y, b.y));
        continue;
      }
      double s = (x - a.x) / (b.x - a.x);
      if (s < 0 || s > 1) continue;
      double y = a.y + s * (b.y - a.y);
      lo = std::fmin(lo, y);
      hi = std::fmax(hi, y);
    }
    return std::pair{lo, hi};
  };

  Adaptive1D<12> quad;
  double x_lo = std::fmin(tri[0].x, std::fmin(tri[1].x, tri[2].x));
  double x_hi = std::fmax(tri[0].x, std::fmax(tri[1].x, tri[2].x));
  auto inner = [&](double x) {
    auto [lo, hi] = y_range(x);
    std::vector<double> y_breaks;
    for (const auto& l : lines)
      if (l.c2 != 0.0) y_breaks.push_back(-(l.c0 + l.c1 * x) / l.c2);
    return quad.integrate([&](double y) { return integrand(P{x, y}); }, lo, hi, y_breaks, tol);
  };
  return quad.integrate(inner, x_lo, x_hi, x_breaks, tol);
}

}  // namespace oracle
