#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgllv/mesh/mesh.hpp"

namespace lgllv {

/// Parse or validation failure, carrying the 1-based line number.
class MeshParseError : public std::runtime_error {
 public:
  MeshParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct MeshReadOptions {
  /// Reject clockwise elements instead of reversing them.
  bool strict = false;
};

/// Reads the text exchange format:
///
///     nv nt ne
///     x y label          (nv lines)
///     v1 v2 v3 region    (nt lines, 1-based)
///     v1 v2 label        (ne lines, 1-based; 1 = wall, 2 = lid)
///
/// Clockwise elements are reversed with a message appended to `warnings`
/// unless `options.strict` is set.
Mesh read_mesh(std::istream& in, const MeshReadOptions& options = {},
               std::vector<std::string>* warnings = nullptr);
Mesh read_mesh_file(const std::string& path, const MeshReadOptions& options = {},
                    std::vector<std::string>* warnings = nullptr);

void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

}  // namespace lgllv
