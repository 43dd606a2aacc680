#include "lgllv/mesh/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lgllv/util/format.hpp"

namespace lgllv {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-blank line split into tokens.
  std::vector<std::string> next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return tokens;
    }
    throw MeshParseError(line_no_ + 1, std::string("unexpected end of file, expected ") + what);
  }
  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

template <class T>
T parse_number(const std::string& token, int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw MeshParseError(line, "malformed number '" + token + "'");
  return value;
}

void expect_count(const std::vector<std::string>& tokens, std::size_t n, int line, const char* what) {
  if (tokens.size() != n)
    throw MeshParseError(line, std::string("expected ") + std::to_string(n) + " fields for " + what + ", got " +
                                   std::to_string(tokens.size()));
}

}  // namespace

Mesh read_mesh(std::istream& in, const MeshReadOptions& options, std::vector<std::string>* warnings) {
  LineReader reader(in);
  auto header = reader.next("header");
  expect_count(header, 3, reader.line(), "header");
  const int nv = parse_number<int>(header[0], reader.line());
  const int nt = parse_number<int>(header[1], reader.line());
  const int ne = parse_number<int>(header[2], reader.line());
  if (nv < 3 || nt < 1 || ne < 0) throw MeshParseError(reader.line(), "invalid counts in header");

  std::vector<Point> vertices(nv);
  std::vector<int> vertex_labels(nv);
  for (int i = 0; i < nv; ++i) {
    auto t = reader.next("vertex");
    expect_count(t, 3, reader.line(), "vertex");
    vertices[i] = {parse_number<double>(t[0], reader.line()), parse_number<double>(t[1], reader.line())};
    vertex_labels[i] = parse_number<int>(t[2], reader.line());
  }

  auto vertex_index = [&](const std::string& token) {
    int v = parse_number<int>(token, reader.line());
    if (v < 1 || v > nv)
      throw MeshParseError(reader.line(), "vertex index " + token + " out of range 1.." + std::to_string(nv));
    return v - 1;
  };

  std::vector<std::array<int, 3>> elements(nt);
  std::vector<int> regions(nt);
  std::vector<int> element_lines(nt);
  for (int k = 0; k < nt; ++k) {
    auto t = reader.next("element");
    expect_count(t, 4, reader.line(), "element");
    elements[k] = {vertex_index(t[0]), vertex_index(t[1]), vertex_index(t[2])};
    regions[k] = parse_number<int>(t[3], reader.line());
    element_lines[k] = reader.line();
    const double a = orient2d(vertices[elements[k][0]], vertices[elements[k][1]], vertices[elements[k][2]]);
    if (a == 0.0) throw MeshParseError(reader.line(), "degenerate element");
    if (a < 0.0) {
      if (options.strict) throw MeshParseError(reader.line(), "clockwise element");
      std::swap(elements[k][1], elements[k][2]);
      if (warnings) warnings->push_back("line " + std::to_string(reader.line()) + ": clockwise element reversed");
    }
  }

  std::vector<BoundaryEdge> boundary(ne);
  for (int i = 0; i < ne; ++i) {
    auto t = reader.next("boundary edge");
    expect_count(t, 3, reader.line(), "boundary edge");
    boundary[i] = {{vertex_index(t[0]), vertex_index(t[1])}, parse_number<int>(t[2], reader.line())};
  }

  try {
    return Mesh(std::move(vertices), std::move(elements), std::move(boundary), std::move(vertex_labels),
                std::move(regions));
  } catch (const MeshError& e) {
    throw MeshParseError(reader.line(), std::string("invalid mesh: ") + e.what());
  }
}

Mesh read_mesh_file(const std::string& path, const MeshReadOptions& options, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path);
  return read_mesh(in, options, warnings);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_elements() << ' ' << mesh.boundary_edges().size() << '\n';
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const Point& p = mesh.vertices()[i];
    out << format_double(p.x1) << ' ' << format_double(p.x2) << ' ' << mesh.vertex_labels()[i] << '\n';
  }
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& e = mesh.elements()[k];
    out << e[0] + 1 << ' ' << e[1] + 1 << ' ' << e[2] + 1 << ' ' << mesh.regions()[k] << '\n';
  }
  for (const auto& b : mesh.boundary_edges())
    out << b.vertices[0] + 1 << ' ' << b.vertices[1] + 1 << ' ' << b.label << '\n';
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path);
  write_mesh(out, mesh);
  if (!out) throw std::runtime_error("error writing mesh file " + path);
}

}  // namespace lgllv
