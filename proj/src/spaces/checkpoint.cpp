#include "lgllv/spaces/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lgllv/util/format.hpp"

namespace lgllv {

namespace {

constexpr const char* kMagic = "lgllv-checkpoint 1";

void mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 1099511628211ull;
  }
}

std::uint64_t parse_hex(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw CheckpointError("bad hash '" + s + "'");
  return v;
}

}  // namespace

std::uint64_t Checkpoint::field_hash() const {
  std::uint64_t h = 14695981039346656037ull;
  mix(h, mesh_hash);
  mix(h, velocity.size());
  for (double v : velocity) mix(h, std::bit_cast<std::uint64_t>(v));
  mix(h, pressure.size());
  for (double v : pressure) mix(h, std::bit_cast<std::uint64_t>(v));
  return h;
}

void write_checkpoint(std::ostream& out, const Checkpoint& cp) {
  out << kMagic << '\n';
  out << "scheme " << cp.scheme << '\n';
  out << "step " << cp.step << '\n';
  out << "time " << format_double(cp.time) << '\n';
  out << "re " << format_double(cp.re) << '\n';
  out << "dt " << format_double(cp.dt) << '\n';
  out << "mesh_hash " << hex64(cp.mesh_hash) << '\n';
  out << "config_hash " << hex64(cp.config_hash) << '\n';
  out << "stationary " << (cp.stationary ? 1 : 0) << '\n';
  out << "velocity_dofs " << cp.velocity.size() << '\n';
  out << "pressure_dofs " << cp.pressure.size() << '\n';
  for (double v : cp.velocity) out << format_double(v) << '\n';
  for (double v : cp.pressure) out << format_double(v) << '\n';
}

void write_checkpoint_file(const std::string& path, const Checkpoint& cp) {
  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
  write_checkpoint(out, cp);
  out.flush();
  if (!out) throw CheckpointError("write failed for '" + path + "'");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw CheckpointError("not a checkpoint (bad magic line)");
  Checkpoint cp;
  std::size_t nu = 0, np = 0;
  auto field = [&](const char* key) {
    if (!std::getline(in, line)) throw CheckpointError(std::string("truncated header, missing ") + key);
    std::istringstream ls(line);
    std::string k, v;
    ls >> k >> v;
    if (k != key || v.empty()) throw CheckpointError(std::string("expected header field ") + key + ", got '" + line + "'");
    return v;
  };
  try {
    cp.scheme = field("scheme");
    cp.step = std::stol(field("step"));
    cp.time = parse_double(field("time"));
    cp.re = parse_double(field("re"));
    cp.dt = parse_double(field("dt"));
    cp.mesh_hash = parse_hex(field("mesh_hash"));
    cp.config_hash = parse_hex(field("config_hash"));
    const std::string stationary = field("stationary");
    if (stationary != "0" && stationary != "1") throw CheckpointError("bad stationary flag '" + stationary + "'");
    cp.stationary = stationary == "1";
    nu = std::stoul(field("velocity_dofs"));
    np = std::stoul(field("pressure_dofs"));
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("bad header value: ") + e.what());
  }
  auto read_values = [&](std::vector<double>& out, std::size_t count) {
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::getline(in, line)) throw CheckpointError("truncated coefficient block");
      try {
        out[i] = parse_double(line);
      } catch (const std::invalid_argument&) {
        throw CheckpointError("bad coefficient '" + line + "'");
      }
    }
  };
  read_values(cp.velocity, nu);
  read_values(cp.pressure, np);
  return cp;
}

Checkpoint read_checkpoint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open '" + path + "'");
  try {
    return read_checkpoint(in);
  } catch (const CheckpointError& e) {
    throw CheckpointError(path + ": " + e.what());
  }
}

}  // namespace lgllv
