#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lgllv/timeloop/timeloop.hpp"

namespace lgllv {

/// Parse or validation failure; `line` is 0 when not tied to a file line.
class ConfigError : public ConfigurationError {
 public:
  ConfigError(int line, const std::string& detail, const std::string& source = "")
      : ConfigurationError(compose(line, detail, source)), line_(line), detail_(detail) {}
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string compose(int line, const std::string& detail, const std::string& source) {
    std::string where = source;
    if (line > 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? detail : where + ": " + detail;
  }
  int line_;
  std::string detail_;
};

struct ConfigKey {
  std::string name;
  std::string help;
};

/// All recognized keys, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Raw `key = value` settings with the line each came from.
struct ConfigSettings {
  std::map<std::string, std::pair<std::string, int>> values;

  /// Later settings override earlier ones (command-line flags over a file).
  void set(const std::string& key, const std::string& value, int line = 0);
};

/// Reads `key = value` lines; `#` starts a comment. Unknown keys and
/// duplicates are rejected with their line number.
ConfigSettings read_settings(std::istream& in);
ConfigSettings read_settings_file(const std::string& path);

/// Defaults overridden by `settings`, then validated.
SimulationConfig make_config(const ConfigSettings& settings);

SimulationConfig parse_config(std::istream& in);
SimulationConfig parse_config_file(const std::string& path);

/// Numbers accept a fraction form `a/b` (e.g. `dt = 1/64`).
double parse_number(const std::string& text);

/// The config as `key = value` lines (round-trips through parse_config).
std::string format_config(const SimulationConfig& config);

}  // namespace lgllv
