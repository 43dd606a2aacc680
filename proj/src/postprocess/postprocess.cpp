#include "lgllv/postprocess/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseCholesky>

#include "lgllv/transport/quadrature.hpp"
#include "lgllv/util/format.hpp"

namespace lgllv {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void check_written(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

bool is_boundary(NodeClass c) { return c != NodeClass::Interior; }

}  // namespace

double eval_scalar(const ScalarP2Field& f, int element, const Bary& bary) {
  const auto phi = p2_values(bary);
  const auto& nodes = f.dofs->element_nodes(element);
  double s = 0.0;
  for (int i = 0; i < 6; ++i) s += phi[i] * f.values[nodes[i]];
  return s;
}

namespace {

Vector curl_load(const VelocityField& u) {
  const VelocityDofMap& dofs = u.dof_map();
  const Mesh& mesh = dofs.mesh();
  Vector load = Vector::Zero(dofs.num_nodes());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& nodes = dofs.element_nodes(k);
    const double area = mesh.area(k);
    for (const auto& q : six_point_rule().points) {
      const Gradient2 g = eval_velocity_gradient(u, k, q.bary);
      const double curl = g[1][0] - g[0][1];
      const auto phi = p2_values(q.bary);
      for (int i = 0; i < 6; ++i) load[nodes[i]] += q.weight * area * curl * phi[i];
    }
  }
  return load;
}

}  // namespace

ScalarP2Field compute_vorticity(const VelocityField& u) {
  const VelocityDofMap& dofs = u.dof_map();
  Eigen::SimplicialLDLT<SparseMatrix> solver(assemble_p2_scalar_mass(dofs));
  if (solver.info() != Eigen::Success) throw std::runtime_error("vorticity projection: mass matrix factorization failed");
  const Vector w = solver.solve(curl_load(u));
  return {&dofs, std::vector<double>(w.data(), w.data() + w.size())};
}

ScalarP2Field compute_stream_function(const VelocityField& u) {
  const VelocityDofMap& dofs = u.dof_map();
  const int n = dofs.num_nodes();
  std::vector<int> reduced(n, -1);
  int m = 0;
  for (int i = 0; i < n; ++i)
    if (!is_boundary(dofs.node_class(i))) reduced[i] = m++;

  ScalarP2Field psi{&dofs, std::vector<double>(n, 0.0)};
  if (m == 0) return psi;
  const SparseMatrix s = assemble_p2_scalar_stiffness(dofs);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(s.nonZeros());
  for (int col = 0; col < s.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(s, col); it; ++it)
      if (reduced[it.row()] >= 0 && reduced[col] >= 0) t.emplace_back(reduced[it.row()], reduced[col], it.value());
  SparseMatrix a(m, m);
  a.setFromTriplets(t.begin(), t.end());

  const Vector load = curl_load(u);
  Vector b(m);
  for (int i = 0; i < n; ++i)
    if (reduced[i] >= 0) b[reduced[i]] = load[i];
  Eigen::SimplicialLDLT<SparseMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("stream function: stiffness factorization failed");
  const Vector x = solver.solve(b);
  for (int i = 0; i < n; ++i)
    if (reduced[i] >= 0) psi.values[i] = x[reduced[i]];
  return psi;
}

std::vector<Contour> extract_contours(const ScalarP2Field& f, const std::vector<double>& levels) {
  const VelocityDofMap& dofs = *f.dofs;
  const Mesh& mesh = dofs.mesh();
  // Sub-triangles in local node numbering.
  static constexpr std::array<std::array<int, 3>, 4> kSub{{{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}}};

  std::vector<Contour> out;
  for (double level : levels) {
    if (!std::isfinite(level)) continue;
    std::map<std::pair<int, int>, int> point_id;
    std::vector<Point> points;
    std::vector<std::vector<int>> adjacent;
    auto crossing = [&](int a, int b) {
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = point_id.try_emplace(key, static_cast<int>(points.size()));
      if (inserted) {
        const double fa = f.values[key.first], fb = f.values[key.second];
        const double t = (level - fa) / (fb - fa);
        points.push_back(dofs.node(key.first) + (dofs.node(key.second) - dofs.node(key.first)) * t);
        adjacent.emplace_back();
      }
      return it->second;
    };

    for (int k = 0; k < mesh.num_elements(); ++k) {
      const auto& nodes = dofs.element_nodes(k);
      for (const auto& sub : kSub) {
        int ends[2];
        int count = 0;
        for (int j = 0; j < 3; ++j) {
          const int a = nodes[sub[j]], b = nodes[sub[(j + 1) % 3]];
          const bool above_a = f.values[a] >= level, above_b = f.values[b] >= level;
          if (above_a != above_b) ends[count++] = crossing(a, b);
        }
        if (count == 2) {
          adjacent[ends[0]].push_back(ends[1]);
          adjacent[ends[1]].push_back(ends[0]);
        }
      }
    }

    std::vector<char> used(points.size(), 0);
    auto trace = [&](int start, bool closed_hint) {
      Contour c;
      c.level = level;
      int prev = -1, cur = start;
      while (true) {
        used[cur] = 1;
        c.points.push_back(points[cur]);
        int next = -1;
        for (int nb : adjacent[cur])
          if (nb != prev && !used[nb]) {
            next = nb;
            break;
          }
        if (next < 0) {
          if (closed_hint && c.points.size() > 2 &&
              std::find(adjacent[cur].begin(), adjacent[cur].end(), start) != adjacent[cur].end())
            c.closed = true;
          break;
        }
        prev = cur;
        cur = next;
      }
      out.push_back(std::move(c));
    };
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!used[i] && adjacent[i].size() == 1) trace(static_cast<int>(i), false);
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!used[i] && !adjacent[i].empty()) trace(static_cast<int>(i), true);
  }
  return out;
}

std::vector<double> default_contour_levels(const ScalarP2Field& f, int per_sign, double decades) {
  double lo = 0.0, hi = 0.0;
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> levels;
  auto add_side = [&](double extreme) {
    if (extreme == 0.0 || per_sign <= 0) return;
    for (int k = 0; k < per_sign; ++k) {
      const double frac = per_sign == 1 ? 0.0 : static_cast<double>(k) / (per_sign - 1);
      levels.push_back(0.98 * extreme * std::pow(10.0, -decades * frac));
    }
  };
  add_side(lo);
  add_side(hi);
  std::sort(levels.begin(), levels.end());
  return levels;
}

double polygon_area(const std::vector<Point>& points) {
  double a = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) a += cross(points[i], points[(i + 1) % points.size()]);
  return 0.5 * a;
}

bool polygon_contains(const std::vector<Point>& points, const Point& p) {
  bool inside = false;
  for (std::size_t i = 0, j = points.size() - 1; i < points.size(); j = i++) {
    const Point& a = points[i];
    const Point& b = points[j];
    if ((a.x2 > p.x2) != (b.x2 > p.x2) && p.x1 < (b.x1 - a.x1) * (p.x2 - a.x2) / (b.x2 - a.x2) + a.x1)
      inside = !inside;
  }
  return inside;
}

const Contour* largest_closed_contour(const std::vector<Contour>& contours) {
  const Contour* best = nullptr;
  double best_area = 0.0;
  for (const Contour& c : contours) {
    if (!c.closed) continue;
    const double a = std::abs(polygon_area(c.points));
    if (a > best_area) {
      best_area = a;
      best = &c;
    }
  }
  return best;
}

std::string branch_name(Branch b) { return b == Branch::Star ? "star" : "double_star"; }

Branch parse_branch(const std::string& s) {
  if (s == "star") return Branch::Star;
  if (s == "double_star") return Branch::DoubleStar;
  throw std::invalid_argument("unknown branch '" + s + "'");
}

std::optional<StagnationResult> find_stagnation_point(const ScalarP2Field& psi, const Segment& side, double re,
                                                      Branch branch) {
  const VelocityDofMap& dofs = *psi.dofs;
  const Mesh& mesh = dofs.mesh();
  const Point d = side.end - side.start;
  const double len2 = dot(d, d);
  const double tol = 1e-9 * mesh.diameter();

  Point inward{-d.x2, d.x1};
  Point center{};
  for (const Point& v : mesh.vertices()) center += v;
  center *= 1.0 / mesh.num_vertices();
  if (dot(inward, center - side.start) < 0.0) inward = inward * -1.0;
  inward *= 1.0 / norm(inward);

  std::vector<std::pair<double, int>> on_side;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Point& x = mesh.vertices()[v];
    const double t = dot(x - side.start, d) / len2;
    if (t < -1e-12 || t > 1.0 + 1e-12) continue;
    if (distance(x, side.start + d * t) <= tol) on_side.emplace_back(t, v);
  }
  std::sort(on_side.begin(), on_side.end());

  std::vector<std::vector<int>> incident(mesh.num_vertices());
  for (int k = 0; k < mesh.num_elements(); ++k)
    for (int v : mesh.elements()[k]) incident[v].push_back(k);

  int initial_sign = 0;
  for (const auto& [t, v] : on_side) {
    const Point& x = mesh.vertices()[v];
    int best = -1;
    double best_cos = -2.0, best_dist = 0.0;
    for (int k : incident[v]) {
      for (int node : dofs.element_nodes(k)) {
        if (is_boundary(dofs.node_class(node))) continue;
        const Point r = dofs.node(node) - x;
        const double dist = norm(r);
        const double c = dot(r, inward) / dist;
        const bool better = c > best_cos + 1e-12 || (std::abs(c - best_cos) <= 1e-12 && dist < best_dist) ||
                            (std::abs(c - best_cos) <= 1e-12 && dist == best_dist && node < best);
        if (best < 0 || better) {
          best = node;
          best_cos = c;
          best_dist = dist;
        }
      }
    }
    if (best < 0) continue;
    const double value = psi.values[best];
    const int sign = (value > 0.0) - (value < 0.0);
    if (sign == 0) continue;
    if (initial_sign == 0) {
      initial_sign = sign;
    } else if (sign != initial_sign) {
      return StagnationResult{v, x, re, branch};
    }
  }
  return std::nullopt;
}

std::optional<StagnationResult> find_stagnation_point(const VelocityField& u, const Segment& side, double re,
                                                      Branch branch) {
  return find_stagnation_point(compute_stream_function(u), side, re, branch);
}

void export_vtk(const std::string& path, const VelocityDofMap& dofs, const VelocityField* u, const PressureField* p,
                const std::vector<std::pair<std::string, const ScalarP2Field*>>& scalars, const VtkOptions& options) {
  const Mesh& mesh = dofs.mesh();
  std::ofstream out = open_output(path);
  const int nn = dofs.num_nodes();
  const int ne = mesh.num_elements();
  out << "# vtk DataFile Version 3.0\nlgllv P2 fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nn << " double\n";
  for (const Point& x : dofs.nodes()) out << format_double(x.x1) << ' ' << format_double(x.x2) << " 0\n";
  if (options.linear_subdivision) {
    static constexpr std::array<std::array<int, 3>, 4> kSub{{{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}}};
    out << "CELLS " << 4 * ne << ' ' << 16 * ne << '\n';
    for (int k = 0; k < ne; ++k) {
      const auto& nodes = dofs.element_nodes(k);
      for (const auto& s : kSub) out << "3 " << nodes[s[0]] << ' ' << nodes[s[1]] << ' ' << nodes[s[2]] << '\n';
    }
    out << "CELL_TYPES " << 4 * ne << '\n';
    for (int i = 0; i < 4 * ne; ++i) out << "5\n";
  } else {
    out << "CELLS " << ne << ' ' << 7 * ne << '\n';
    for (int k = 0; k < ne; ++k) {
      out << '6';
      for (int node : dofs.element_nodes(k)) out << ' ' << node;
      out << '\n';
    }
    out << "CELL_TYPES " << ne << '\n';
    for (int k = 0; k < ne; ++k) out << "22\n";
  }

  if (u || p || !scalars.empty()) out << "POINT_DATA " << nn << '\n';
  if (u) {
    out << "VECTORS velocity double\n";
    for (int i = 0; i < nn; ++i) {
      const Point v = u->node_value(i);
      out << format_double(v.x1) << ' ' << format_double(v.x2) << " 0\n";
    }
  }
  if (p) {
    // P1 pressure at the P2 nodes: vertex values, midpoint averages.
    std::vector<double> at_nodes(nn, 0.0);
    for (int k = 0; k < ne; ++k) {
      const auto& nodes = dofs.element_nodes(k);
      const auto& v = mesh.elements()[k];
      for (int i = 0; i < 3; ++i) {
        at_nodes[nodes[i]] = p->values()[v[i]];
        at_nodes[nodes[3 + i]] = 0.5 * (p->values()[v[i]] + p->values()[v[(i + 1) % 3]]);
      }
    }
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (double x : at_nodes) out << format_double(x) << '\n';
  }
  for (const auto& [name, field] : scalars) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : field->values) out << format_double(x) << '\n';
  }
  check_written(out, path);
}

void export_svg(const std::string& path, const Mesh& mesh, const std::vector<Contour>& contours) {
  const BoundingBox box = mesh.bounding_box();
  const double w = box.hi.x1 - box.lo.x1, h = box.hi.x2 - box.lo.x2;
  const double stroke = 0.002 * std::max(w, h);
  auto pt = [](const Point& x) { return format_double(x.x1) + "," + format_double(-x.x2); };
  std::ofstream out = open_output(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
      << static_cast<int>(std::lround(800.0 * h / w)) << "\" viewBox=\"" << format_double(box.lo.x1) << ' '
      << format_double(-box.hi.x2) << ' ' << format_double(w) << ' ' << format_double(h) << "\">\n";
  for (const auto& loop : mesh.boundary_loops()) {
    out << "<polygon class=\"outline\" fill=\"none\" stroke=\"black\" stroke-width=\"" << format_double(2 * stroke)
        << "\" points=\"";
    for (std::size_t i = 0; i < loop.size(); ++i) out << (i ? " " : "") << pt(mesh.vertices()[loop[i]]);
    out << "\"/>\n";
  }
  for (const Contour& c : contours) {
    out << "<polyline fill=\"none\" stroke=\"" << (c.level < 0.0 ? "#1f5fbf" : "#bf1f1f") << "\" stroke-width=\""
        << format_double(stroke) << "\" data-level=\"" << format_double(c.level) << "\" points=\"";
    for (std::size_t i = 0; i < c.points.size(); ++i) out << (i ? " " : "") << pt(c.points[i]);
    if (c.closed && !c.points.empty()) out << ' ' << pt(c.points.front());
    out << "\"/>\n";
  }
  out << "</svg>\n";
  check_written(out, path);
}

void export_stagnation_csv(const std::string& path, const std::vector<StagnationResult>& series) {
  std::ofstream out = open_output(path);
  out << "Re,branch,node,x1,x2\n";
  for (const auto& s : series)
    out << format_double(s.re) << ',' << branch_name(s.branch) << ',' << s.node << ',' << format_double(s.x.x1) << ','
        << format_double(s.x.x2) << '\n';
  check_written(out, path);
}

std::vector<StagnationResult> read_stagnation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "Re,branch,node,x1,x2")
    throw std::runtime_error(path + ": missing stagnation CSV header");
  std::vector<StagnationResult> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    try {
      if (cols.size() != 5) throw std::invalid_argument("expected 5 columns");
      StagnationResult r;
      r.re = parse_double(cols[0]);
      r.branch = parse_branch(cols[1]);
      r.node = std::stoi(cols[2]);
      r.x = {parse_double(cols[3]), parse_double(cols[4])};
      out.push_back(r);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

double reynolds_rescale(double re, DomainKind kind) {
  switch (kind) {
    case DomainKind::Equilateral:
      return re / (2.0 * std::numbers::sqrt3);
    case DomainKind::Isosceles:
      return re / 2.0;
    default:
      throw std::invalid_argument("no literature Reynolds scaling for this domain preset");
  }
}

}  // namespace lgllv
