#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgllv/mesh/point_locator.hpp"
#include "lgllv/spaces/fields.hpp"
#include "lgllv/transport/clipping.hpp"
#include "lgllv/transport/quadrature.hpp"

namespace lgllv {

/// x -> matrix * x + offset.
struct AffineMap {
  Gradient2 matrix{{{1.0, 0.0}, {0.0, 1.0}}};
  Point offset{};
  double det = 1.0;

  static AffineMap from_matrix(const Gradient2& matrix, const Point& offset);
  /// The unique affine map sending source[i] to image[i].
  static AffineMap from_vertex_images(const Triangle& source, const Triangle& image);

  Point apply(const Point& p) const {
    return {matrix[0][0] * p.x1 + matrix[0][1] * p.x2 + offset.x1, matrix[1][0] * p.x1 + matrix[1][1] * p.x2 + offset.x2};
  }
  Point apply_inverse(const Point& p) const;
};

/// The characteristic foot map x - (Pi_1 w)(x) dt restricted to one element.
/// `image[i]` is computed directly as vertex_i - w(vertex_i) dt.
struct ElementMap {
  int element = -1;
  Triangle image{};
  AffineMap map;
};

ElementMap x1_map_on_element(const P1VectorField& w, double dt, int element);

/// Smallest determinant accepted for a characteristic map.
inline constexpr double kMinDeterminant = 1e-10;

struct NonInjective {
  int element = -1;
  double determinant = 0.0;
};

/// nullopt when det >= kMinDeterminant.
std::optional<NonInjective> check_injectivity(const AffineMap& map, int element);

/// Thrown when a time step meets a folded characteristic map; the caller
/// should reduce the time increment.
class NonInjectiveMap : public std::runtime_error {
 public:
  explicit NonInjectiveMap(const NonInjective& info)
      : std::runtime_error("characteristic map is not injective on element " + std::to_string(info.element) +
                           " (det = " + std::to_string(info.determinant) + "); reduce dt"),
        info_(info) {}
  const NonInjective& info() const { return info_; }

 private:
  NonInjective info_;
};

/// Per-element diagnostics from composite-term integration.
struct CompositeStats {
  /// Fraction of |K| whose image fell outside the domain.
  double deficit = 0.0;
  /// Set when the image leaves the domain by more than the coverage tolerance.
  bool out_of_domain = false;
  /// Quadrature-mode points projected back onto the boundary.
  int projected_points = 0;
};

/// Integrates composite terms (u o X, phi_i) over single elements.
///
/// Exact mode intersects the image X(K) with every element K' it meets,
/// pulls each piece back into K, and applies a degree-4 rule on a fan
/// triangulation; on each sub-triangle (u|K' o X) phi_i is one polynomial of
/// degree <= 4, so the result is exact up to roundoff. Parts of X(K) outside
/// a convex domain use the nearest-boundary-point extension of u.
class CompositeIntegrator {
 public:
  CompositeIntegrator(const VelocityDofMap& dofs, const PointLocator& locator);

  const VelocityDofMap& dof_map() const { return *dofs_; }
  const PointLocator& locator() const { return *locator_; }
  bool domain_is_convex() const { return !hull_.empty(); }

  /// Returns (u_prev o map, phi_i) over K for the 12 local velocity basis
  /// functions (interleaved per local node). Throws NonInjectiveMap.
  std::array<double, 12> local_vector(const VelocityField& u_prev, const ElementMap& em,
                                      const QuadratureRule& rule = six_point_rule(),
                                      CompositeStats* stats = nullptr) const;

  /// Quadrature-based composite term using the full quadratic velocity `w`:
  /// evaluates u_prev(y - w(y) dt) phi_i(y) at the rule points of K.
  std::array<double, 12> local_vector_quadrature(const VelocityField& u_prev, const VelocityField& w, double dt,
                                                 int element, const QuadratureRule& rule,
                                                 CompositeStats* stats = nullptr) const;

  /// Sum over K' of |K intersect map^{-1}(K' intersect map(K))|.
  double pulled_back_area(const ElementMap& em) const;

  /// Nearest point on the domain boundary.
  Point project_to_boundary(const Point& p) const;
  /// u at x, or at the nearest boundary point when x is outside the mesh.
  Point eval_extended(const VelocityField& u, const Point& x, int hint = -1, bool* projected = nullptr) const;

 private:
  template <class Fn>
  void for_each_piece(const ElementMap& em, Fn&& fn) const;

  const VelocityDofMap* dofs_;
  const PointLocator* locator_;
  std::vector<std::array<Point, 2>> boundary_segments_;
  std::vector<Point> hull_;  // convex domain corners (ccw), empty when non-convex
};

}  // namespace lgllv
