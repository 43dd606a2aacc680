#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgllv/assembly/assembly.hpp"
#include "lgllv/mesh/cavity_mesh.hpp"

namespace lgllv {

/// Continuous P2 scalar field, one value per velocity node.
struct ScalarP2Field {
  const VelocityDofMap* dofs = nullptr;
  std::vector<double> values;
};

double eval_scalar(const ScalarP2Field& f, int element, const Bary& bary);

/// L2 projection of the element-wise curl du2/dx1 - du1/dx2 onto P2.
ScalarP2Field compute_vorticity(const VelocityField& u);
/// -Laplace(psi) = omega with psi = 0 on the boundary (the boundary values
/// are exactly zero).
ScalarP2Field compute_stream_function(const VelocityField& u);

struct Contour {
  double level = 0.0;
  std::vector<Point> points;
  bool closed = false;
};

/// Level sets of the piecewise linear resampling of `f` on the four
/// sub-triangles of each element. Crossing points are keyed by global node
/// pairs, so polylines continue across elements.
std::vector<Contour> extract_contours(const ScalarP2Field& f, const std::vector<double>& levels);

/// `per_sign` geometrically spaced levels on each side of zero, from 0.98 of
/// the extreme value down over `decades` decades. A sign with no values
/// contributes no levels.
std::vector<double> default_contour_levels(const ScalarP2Field& f, int per_sign = 10, double decades = 6.0);

double polygon_area(const std::vector<Point>& points);
bool polygon_contains(const std::vector<Point>& points, const Point& p);
/// Closed contour with the largest enclosed area, if any.
const Contour* largest_closed_contour(const std::vector<Contour>& contours);

enum class Branch { Star, DoubleStar };
std::string branch_name(Branch b);
Branch parse_branch(const std::string& s);

struct StagnationResult {
  int node = -1;  // mesh vertex index
  Point x;
  double re = 0.0;
  Branch branch = Branch::Star;

  bool operator==(const StagnationResult&) const = default;
};

/// Walks the mesh vertices on `side` from side.start. The indicator at each
/// vertex is the sign of psi at the interior P2 node of its incident
/// elements best aligned with the inward normal. Returns the first vertex
/// whose indicator differs from the initial one; nullopt (no stagnation) when
/// the sign never changes.
std::optional<StagnationResult> find_stagnation_point(const ScalarP2Field& psi, const Segment& side, double re,
                                                      Branch branch);
std::optional<StagnationResult> find_stagnation_point(const VelocityField& u, const Segment& side, double re,
                                                      Branch branch);

struct VtkOptions {
  /// Write four linear triangles per element instead of quadratic cells.
  bool linear_subdivision = false;
};

/// Legacy ASCII unstructured grid with the P2 nodes as points. Any of the
/// field pointers may be null.
void export_vtk(const std::string& path, const VelocityDofMap& dofs, const VelocityField* u, const PressureField* p,
                const std::vector<std::pair<std::string, const ScalarP2Field*>>& scalars = {},
                const VtkOptions& options = {});

/// Contours as <polyline> elements over the domain outline, viewBox equal to
/// the domain bounding box (x2 pointing up).
void export_svg(const std::string& path, const Mesh& mesh, const std::vector<Contour>& contours);

/// Columns Re, branch, node, x1, x2.
void export_stagnation_csv(const std::string& path, const std::vector<StagnationResult>& series);
std::vector<StagnationResult> read_stagnation_csv(const std::string& path);

/// Re of the unit-side equilateral preset divided by 2 sqrt(3); of the
/// isosceles preset divided by 2. Other presets throw std::invalid_argument.
double reynolds_rescale(double re, DomainKind kind);

}  // namespace lgllv
