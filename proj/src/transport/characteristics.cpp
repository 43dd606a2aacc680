#include "lgllv/transport/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lgllv {

AffineMap AffineMap::from_matrix(const Gradient2& matrix, const Point& offset) {
  AffineMap m;
  m.matrix = matrix;
  m.offset = offset;
  m.det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
  return m;
}

AffineMap AffineMap::from_vertex_images(const Triangle& source, const Triangle& image) {
  const Point s1 = source[1] - source[0];
  const Point s2 = source[2] - source[0];
  const Point i1 = image[1] - image[0];
  const Point i2 = image[2] - image[0];
  const double sdet = cross(s1, s2);
  // Inverse of the column matrix [s1 s2].
  const double inv00 = s2.x2 / sdet, inv01 = -s2.x1 / sdet;
  const double inv10 = -s1.x2 / sdet, inv11 = s1.x1 / sdet;
  Gradient2 m{{{i1.x1 * inv00 + i2.x1 * inv10, i1.x1 * inv01 + i2.x1 * inv11},
               {i1.x2 * inv00 + i2.x2 * inv10, i1.x2 * inv01 + i2.x2 * inv11}}};
  AffineMap out = from_matrix(m, Point{});
  const Point ms0 = out.apply(source[0]);
  out.offset = image[0] - ms0;
  return out;
}

Point AffineMap::apply_inverse(const Point& p) const {
  const Point q = p - offset;
  return {(matrix[1][1] * q.x1 - matrix[0][1] * q.x2) / det, (-matrix[1][0] * q.x1 + matrix[0][0] * q.x2) / det};
}

ElementMap x1_map_on_element(const P1VectorField& w, double dt, int element) {
  const Mesh& mesh = w.mesh();
  const Triangle source = mesh.triangle(element);
  const auto& el = mesh.elements()[element];
  ElementMap em;
  em.element = element;
  for (int i = 0; i < 3; ++i) em.image[i] = source[i] - w.values()[el[i]] * dt;
  em.map = AffineMap::from_vertex_images(source, em.image);
  return em;
}

std::optional<NonInjective> check_injectivity(const AffineMap& map, int element) {
  if (map.det >= kMinDeterminant) return std::nullopt;
  return NonInjective{element, map.det};
}

CompositeIntegrator::CompositeIntegrator(const VelocityDofMap& dofs, const PointLocator& locator)
    : dofs_(&dofs), locator_(&locator) {
  const Mesh& mesh = dofs.mesh();
  for (const Edge& e : mesh.edges())
    if (e.on_boundary()) boundary_segments_.push_back({mesh.vertices()[e.vertices[0]], mesh.vertices()[e.vertices[1]]});

  const auto loops = mesh.boundary_loops();
  if (loops.size() != 1) return;
  const auto& loop = loops.front();
  const auto& v = mesh.vertices();
  const std::size_t n = loop.size();
  const double tol = 1e-12 * mesh.diameter() * mesh.diameter();
  std::vector<Point> corners;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& prev = v[loop[(i + n - 1) % n]];
    const Point& cur = v[loop[i]];
    const Point& next = v[loop[(i + 1) % n]];
    const double turn = orient2d(prev, cur, next);
    if (turn < -tol) return;  // reflex corner: not convex
    if (turn > tol) corners.push_back(cur);
  }
  if (corners.size() >= 3) hull_ = std::move(corners);
}

template <class Fn>
void CompositeIntegrator::for_each_piece(const ElementMap& em, Fn&& fn) const {
  BoundingBox box = BoundingBox::of(em.image.data(), em.image.data() + 3);
  const double pad = locator_->tolerance();
  box.lo -= Point{pad, pad};
  box.hi += Point{pad, pad};
  thread_local std::vector<int> candidates;
  locator_->candidates(box, candidates);
  const Mesh& mesh = dofs_->mesh();
  for (int kp : candidates) {
    auto piece = clip_triangles(em.image, mesh.triangle(kp));
    if (piece) fn(kp, *piece);
  }
}

namespace {

template <class Eval>
void integrate_piece(const ConvexPolygon& piece, const AffineMap& map, const BarycentricMap& bary_k,
                     const QuadratureRule& rule, Eval&& eval_u, std::array<double, 12>& acc, double& covered) {
  const std::size_t n = piece.vertices.size();
  thread_local std::vector<Point> pulled;
  pulled.resize(n);
  Point cy{};
  for (std::size_t j = 0; j < n; ++j) {
    pulled[j] = map.apply_inverse(piece.vertices[j]);
    cy += pulled[j];
  }
  cy *= 1.0 / static_cast<double>(n);
  const Point cx = piece.vertex_centroid();
  for (std::size_t j = 0; j < n; ++j) {
    const Triangle ty{cy, pulled[j], pulled[(j + 1) % n]};
    const Triangle tx{cx, piece.vertices[j], piece.vertices[(j + 1) % n]};
    const double area = signed_area(ty);
    if (!(area > 0.0)) continue;
    covered += area;
    for (const auto& q : rule.points) {
      const Point y = from_barycentric(ty, q.bary);
      const Point x = from_barycentric(tx, q.bary);
      const Point u = eval_u(x);
      const auto phi = p2_values(bary_k(y));
      const double w = q.weight * area;
      for (int i = 0; i < 6; ++i) {
        acc[2 * i] += w * u.x1 * phi[i];
        acc[2 * i + 1] += w * u.x2 * phi[i];
      }
    }
  }
}

}  // namespace

std::array<double, 12> CompositeIntegrator::local_vector(const VelocityField& u_prev, const ElementMap& em,
                                                         const QuadratureRule& rule, CompositeStats* stats) const {
  if (auto bad = check_injectivity(em.map, em.element)) throw NonInjectiveMap(*bad);
  const int k = em.element;
  const BarycentricMap& bary_k = dofs_->barycentric(k);
  std::array<double, 12> acc{};
  double covered = 0.0;

  for_each_piece(em, [&](int kp, const ConvexPolygon& piece) {
    const auto coeffs = u_prev.local(kp);
    const BarycentricMap& bary_kp = dofs_->barycentric(kp);
    auto eval_u = [&](const Point& x) {
      const auto phi = p2_values(bary_kp(x));
      Point u{};
      for (int i = 0; i < 6; ++i) {
        u.x1 += phi[i] * coeffs[2 * i];
        u.x2 += phi[i] * coeffs[2 * i + 1];
      }
      return u;
    };
    integrate_piece(piece, em.map, bary_k, rule, eval_u, acc, covered);
  });

  const double area_k = dofs_->mesh().area(k);
  const double deficit = 1.0 - covered / area_k;
  if (stats) stats->deficit = deficit;
  if (deficit > 1e-8) {
    if (stats) stats->out_of_domain = true;
    if (domain_is_convex()) {
      // The complement of a convex domain splits into the disjoint regions
      // H_1 n ... n H_{j-1} n not(H_j) over its edge half-planes H_j.
      std::vector<Point> rest(em.image.begin(), em.image.end());
      const std::size_t m = hull_.size();
      double extra = 0.0;
      for (std::size_t j = 0; j < m && rest.size() >= 3; ++j) {
        const Point& a = hull_[j];
        const Point& b = hull_[(j + 1) % m];
        ConvexPolygon outside{clip_halfplane(rest, b, a)};
        rest = clip_halfplane(rest, a, b);
        if (outside.vertices.size() < 3 || !(outside.area() > 0.0)) continue;
        auto eval_u = [&](const Point& x) { return eval_extended(u_prev, x); };
        integrate_piece(outside, em.map, bary_k, rule, eval_u, acc, extra);
      }
    }
  }
  return acc;
}

std::array<double, 12> CompositeIntegrator::local_vector_quadrature(const VelocityField& u_prev,
                                                                    const VelocityField& w, double dt, int element,
                                                                    const QuadratureRule& rule,
                                                                    CompositeStats* stats) const {
  std::array<double, 12> acc{};
  const Triangle t = dofs_->mesh().triangle(element);
  const double area = dofs_->mesh().area(element);
  for (const auto& q : rule.points) {
    const Point y = from_barycentric(t, q.bary);
    const Point x = y - eval_velocity(w, element, q.bary) * dt;
    bool projected = false;
    const Point u = eval_extended(u_prev, x, element, &projected);
    if (projected && stats) {
      ++stats->projected_points;
      stats->out_of_domain = true;
    }
    const auto phi = p2_values(q.bary);
    const double wq = q.weight * area;
    for (int i = 0; i < 6; ++i) {
      acc[2 * i] += wq * u.x1 * phi[i];
      acc[2 * i + 1] += wq * u.x2 * phi[i];
    }
  }
  return acc;
}

double CompositeIntegrator::pulled_back_area(const ElementMap& em) const {
  double total = 0.0;
  for_each_piece(em, [&](int, const ConvexPolygon& piece) {
    std::vector<Point> pulled;
    for (const Point& p : piece.vertices) pulled.push_back(em.map.apply_inverse(p));
    total += ConvexPolygon{std::move(pulled)}.area();
  });
  return total;
}

Point CompositeIntegrator::project_to_boundary(const Point& p) const {
  double best = std::numeric_limits<double>::infinity();
  Point out = p;
  for (const auto& [a, b] : boundary_segments_) {
    const Point d = b - a;
    const double t = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
    const Point q = a + d * t;
    const double dist = distance(p, q);
    if (dist < best) {
      best = dist;
      out = q;
    }
  }
  return out;
}

Point CompositeIntegrator::eval_extended(const VelocityField& u, const Point& x, int hint, bool* projected) const {
  if (projected) *projected = false;
  if (auto loc = locator_->locate(x, hint)) return eval_velocity(u, loc->element, loc->bary);
  if (projected) *projected = true;
  const Point q = project_to_boundary(x);
  if (auto loc = locator_->locate(q)) return eval_velocity(u, loc->element, loc->bary);
  return {};
}

}  // namespace lgllv
