#include "lgllv/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lgllv/util/format.hpp"

namespace lgllv {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"re", "Reynolds number (nu = 1/re)"},
      {"dt", "time step"},
      {"t_max", "stop time when not stationary"},
      {"max_steps", "step limit (0: none)"},
      {"n", "mesh segments per side"},
      {"domain", "equilateral | isosceles | square"},
      {"iso_base", "isosceles lid length"},
      {"iso_height", "isosceles height"},
      {"lid_ramp", "lid regularization width as a fraction of the lid"},
      {"tolerance", "stationarity tolerance"},
      {"boundary", "lid | noslip"},
      {"initial", "zero | checkpoint | resume | stokes"},
      {"checkpoint", "checkpoint path for initial = checkpoint or resume"},
      {"mode", "exact | quadrature"},
      {"quadrature_order", "rule degree for mode = quadrature"},
      {"solver", "direct | minres"},
      {"output_every", "progress report cadence in steps (0: off)"},
      {"checkpoint_every", "checkpoint cadence in steps (0: final only)"},
      {"output_dir", "directory for checkpoints and traces"},
      {"run_name", "file name prefix"},
      {"auto_halve_dt", "halve dt and retry when the characteristic map folds"},
      {"max_halvings", "limit for auto_halve_dt"},
  };
  return keys;
}

namespace {

bool known_key(const std::string& key) {
  const auto& keys = config_keys();
  return std::any_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == key; });
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long parse_integer(const std::string& text) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw std::invalid_argument("not an integer: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw std::invalid_argument("not a boolean: '" + text + "'");
}

}  // namespace

double parse_number(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_double(text);
  const double num = parse_double(trim(text.substr(0, slash)));
  const double den = parse_double(trim(text.substr(slash + 1)));
  if (den == 0.0) throw std::invalid_argument("division by zero in '" + text + "'");
  return num / den;
}

void ConfigSettings::set(const std::string& key, const std::string& value, int line) {
  if (!known_key(key)) throw ConfigError(line, "unknown key '" + key + "'");
  values[key] = {value, line};
}

ConfigSettings read_settings(std::istream& in) {
  ConfigSettings settings;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key");
    if (value.empty()) throw ConfigError(line, "missing value for '" + key + "'");
    if (settings.values.count(key))
      throw ConfigError(line, "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(settings.values[key].second) + ")");
    settings.set(key, value, line);
  }
  return settings;
}

ConfigSettings read_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config '" + path + "'");
  try {
    return read_settings(in);
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), e.detail(), path);
  }
}

SimulationConfig make_config(const ConfigSettings& settings) {
  SimulationConfig c;
  double iso_base = 1.0, iso_height = 2.0;
  std::string domain = "equilateral";

  for (const auto& [key, entry] : settings.values) {
    const auto& [value, line] = entry;
    try {
      if (key == "re") c.re = parse_number(value);
      else if (key == "dt") c.dt = parse_number(value);
      else if (key == "t_max") c.t_max = parse_number(value);
      else if (key == "max_steps") c.max_steps = parse_integer(value);
      else if (key == "n") c.n = static_cast<int>(parse_integer(value));
      else if (key == "domain") domain = value;
      else if (key == "iso_base") iso_base = parse_number(value);
      else if (key == "iso_height") iso_height = parse_number(value);
      else if (key == "lid_ramp") c.lid_ramp = parse_number(value);
      else if (key == "tolerance") c.tolerance = parse_number(value);
      else if (key == "boundary") {
        if (value == "lid") c.boundary = BoundaryKind::Lid;
        else if (value == "noslip") c.boundary = BoundaryKind::NoSlip;
        else throw std::invalid_argument("boundary must be lid or noslip");
      } else if (key == "initial") {
        if (value == "zero") c.initial = InitialKind::Zero;
        else if (value == "checkpoint") c.initial = InitialKind::Checkpoint;
        else if (value == "resume") c.initial = InitialKind::Resume;
        else if (value == "stokes") c.initial = InitialKind::Stokes;
        else throw std::invalid_argument("initial must be zero, checkpoint, resume or stokes");
      } else if (key == "checkpoint") c.checkpoint_path = value;
      else if (key == "mode") {
        if (value == "exact") c.mode.exact = true;
        else if (value == "quadrature") c.mode.exact = false;
        else throw std::invalid_argument("mode must be exact or quadrature");
      } else if (key == "quadrature_order") c.mode.quadrature_degree = static_cast<int>(parse_integer(value));
      else if (key == "solver") {
        if (value == "direct") c.solver = SolverKind::Direct;
        else if (value == "minres") c.solver = SolverKind::Minres;
        else throw std::invalid_argument("solver must be direct or minres");
      } else if (key == "output_every") c.output_every = parse_integer(value);
      else if (key == "checkpoint_every") c.checkpoint_every = parse_integer(value);
      else if (key == "output_dir") c.output_dir = value;
      else if (key == "run_name") c.run_name = value;
      else if (key == "auto_halve_dt") c.auto_halve_dt = parse_bool(value);
      else if (key == "max_halvings") c.max_halvings = static_cast<int>(parse_integer(value));
      else throw std::invalid_argument("unknown key");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, key + ": " + e.what());
    }
  }

  const auto line_of = [&](const std::string& key) {
    auto it = settings.values.find(key);
    return it == settings.values.end() ? 0 : it->second.second;
  };
  if (domain == "equilateral") c.domain = DomainPreset::equilateral();
  else if (domain == "isosceles") c.domain = DomainPreset::isosceles(iso_base, iso_height);
  else if (domain == "square") c.domain = DomainPreset::unit_square();
  else throw ConfigError(line_of("domain"), "domain must be equilateral, isosceles or square");

  try {
    c.validate();
  } catch (const ConfigurationError& e) {
    // Point at the offending key when the message names it.
    int line = 0;
    for (const auto& [key, entry] : settings.values)
      if (std::string(e.what()).rfind(key + " ", 0) == 0) line = entry.second;
    throw ConfigError(line, e.what());
  }
  return c;
}

SimulationConfig parse_config(std::istream& in) { return make_config(read_settings(in)); }

SimulationConfig parse_config_file(const std::string& path) {
  const ConfigSettings settings = read_settings_file(path);
  try {
    return make_config(settings);
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), e.detail(), path);
  }
}

std::string format_config(const SimulationConfig& c) {
  std::ostringstream out;
  out << "re = " << format_double(c.re) << '\n';
  out << "dt = " << format_double(c.dt) << '\n';
  out << "t_max = " << format_double(c.t_max) << '\n';
  out << "max_steps = " << c.max_steps << '\n';
  out << "n = " << c.n << '\n';
  switch (c.domain.kind) {
    case DomainKind::Equilateral:
      out << "domain = equilateral\n";
      break;
    case DomainKind::Isosceles:
      out << "domain = isosceles\n";
      out << "iso_base = " << format_double(c.domain.corners[1].x1 - c.domain.corners[0].x1) << '\n';
      out << "iso_height = " << format_double(c.domain.corners[0].x2 - c.domain.corners[2].x2) << '\n';
      break;
    case DomainKind::UnitSquare:
      out << "domain = square\n";
      break;
    case DomainKind::Triangle:
      out << "# domain: custom triangle (not expressible as a key)\n";
      break;
  }
  out << "lid_ramp = " << format_double(c.lid_ramp) << '\n';
  out << "tolerance = " << format_double(c.tolerance) << '\n';
  out << "boundary = " << (c.boundary == BoundaryKind::NoSlip ? "noslip" : "lid") << '\n';
  static const char* initial_names[] = {"zero", "checkpoint", "resume", "stokes"};
  out << "initial = " << initial_names[static_cast<int>(c.initial)] << '\n';
  if (!c.checkpoint_path.empty()) out << "checkpoint = " << c.checkpoint_path << '\n';
  out << "mode = " << (c.mode.exact ? "exact" : "quadrature") << '\n';
  out << "quadrature_order = " << c.mode.quadrature_degree << '\n';
  out << "solver = " << (c.solver == SolverKind::Direct ? "direct" : "minres") << '\n';
  out << "output_every = " << c.output_every << '\n';
  out << "checkpoint_every = " << c.checkpoint_every << '\n';
  if (!c.output_dir.empty()) out << "output_dir = " << c.output_dir << '\n';
  out << "run_name = " << c.run_name << '\n';
  out << "auto_halve_dt = " << (c.auto_halve_dt ? "true" : "false") << '\n';
  out << "max_halvings = " << c.max_halvings << '\n';
  return out.str();
}

}  // namespace lgllv
