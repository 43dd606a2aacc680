#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgllv {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Restartable state of a run. Text format: a header of `key value` lines,
/// then one coefficient per line (velocity dofs, then pressure dofs).
struct Checkpoint {
  std::string scheme = "LG-LLV";
  long step = 0;
  double time = 0.0;
  double re = 0.0;
  double dt = 0.0;
  std::uint64_t mesh_hash = 0;
  std::uint64_t config_hash = 0;
  /// Set when the run that wrote it met its stationarity criterion.
  bool stationary = false;
  std::vector<double> velocity;
  std::vector<double> pressure;

  /// FNV-1a over the mesh hash and the coefficient bit patterns. Equal for a
  /// final state and the same fields reused as another run's initial state.
  std::uint64_t field_hash() const;
};

void write_checkpoint(std::ostream& out, const Checkpoint& cp);
void write_checkpoint_file(const std::string& path, const Checkpoint& cp);
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint_file(const std::string& path);

}  // namespace lgllv
