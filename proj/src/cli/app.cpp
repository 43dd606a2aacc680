#include "lgllv/cli/app.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "lgllv/cli/config.hpp"
#include "lgllv/cli/experiments.hpp"
#include "lgllv/mesh/mesh_io.hpp"
#include "lgllv/util/format.hpp"

namespace lgllv {

namespace {

constexpr int kExitError = 1;
constexpr int kExitUnconverged = 2;

/// `--key value` flags for every config key, applied over the config file.
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", file, "config file (key = value lines)");
    for (const auto& key : config_keys()) {
      std::string names = "--" + key.name;
      std::string dashed = key.name;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != key.name) names += ",--" + dashed;
      app->add_option(names, values[key.name], key.help)->group("Config keys");
    }
  }

  SimulationConfig build() const {
    ConfigSettings settings;
    if (!file.empty()) settings = read_settings_file(file);
    for (const auto& [key, value] : values)
      if (!value.empty()) settings.set(key, value);
    if (file.empty()) return make_config(settings);
    try {
      return make_config(settings);
    } catch (const ConfigError& e) {
      throw ConfigError(e.line(), e.detail(), e.line() > 0 ? file : "");
    }
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_number(item));
  }
  return out;
}

void print_run(std::ostream& out, const RunResult& r, double tolerance) {
  out << "steps " << r.state.step << ", t = " << format_double(r.state.time) << ", dt = " << format_double(r.dt)
      << '\n';
  if (!r.report.rate_u.empty())
    out << "final rates: u " << format_double(r.report.rate_u.back()) << ", p "
        << format_double(r.report.rate_p.back()) << '\n';
  if (tolerance > 0.0)
    out << (r.report.converged ? "stationary at step " + std::to_string(r.report.converged_step)
                               : std::string("not stationary"))
        << '\n';
  if (!r.final_checkpoint.empty()) out << "checkpoint " << r.final_checkpoint << '\n';
}

int finish_run(std::ostream& out, const SimulationConfig& config) {
  Simulation sim(config);
  StepObserver observer;
  if (config.output_every > 0) {
    observer = [&](const SimulationState& s, const TraceRow& row, const StepDiagnostics&) {
      if (s.step > 0 && s.step % config.output_every == 0)
        out << "step " << s.step << " t=" << format_double(row.time) << " rate_u=" << format_double(row.rate_u)
            << " rate_p=" << format_double(row.rate_p) << " energy=" << format_double(row.kinetic_energy)
            << " out_of_domain=" << row.out_of_domain << std::endl;
    };
  }
  const RunResult r = sim.run(observer);
  print_run(out, r, config.tolerance);
  return config.tolerance > 0.0 && !r.report.converged ? kExitUnconverged : 0;
}

void print_outcome(std::ostream& out, const ExperimentOutcome& o) {
  for (const auto& r : o.runs) {
    out << r.name << ": Re " << format_double(r.re) << ", dt " << format_double(r.dt) << ", "
        << (r.converged ? "stationary" : "NOT stationary") << (r.reused ? " (reused)" : "") << ", steps " << r.steps;
    if (r.stagnation)
      out << ", stagnation node " << r.stagnation->node << " at (" << format_double(r.stagnation->x.x1) << ", "
          << format_double(r.stagnation->x.x2) << ")";
    else
      out << ", no stagnation point";
    out << '\n';
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lagrange-Galerkin Navier-Stokes solver with exactly integrated composite terms"};
  app.require_subcommand(1);

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "generate or inspect a mesh");
  std::string mesh_domain = "equilateral", mesh_in, mesh_out;
  int mesh_n = 32;
  double iso_base = 1.0, iso_height = 2.0;
  mesh_cmd->add_option("--domain", mesh_domain, "equilateral | isosceles | square")->capture_default_str();
  mesh_cmd->add_option("-n,--n", mesh_n, "segments per side")->capture_default_str();
  mesh_cmd->add_option("--iso-base", iso_base)->capture_default_str();
  mesh_cmd->add_option("--iso-height", iso_height)->capture_default_str();
  mesh_cmd->add_option("--in", mesh_in, "inspect this mesh file instead of generating one");
  mesh_cmd->add_option("-o,--out", mesh_out, "write the mesh here");

  // run / resume
  auto* run_cmd = app.add_subcommand("run", "run one configuration");
  ConfigFlags run_flags;
  run_flags.attach(run_cmd);
  auto* resume_cmd = app.add_subcommand("resume", "continue a checkpointed run");
  ConfigFlags resume_flags;
  resume_flags.attach(resume_cmd);

  // examples
  ExampleOptions ex;
  std::string stage = "star";
  bool paper_scale = false, fresh = false;
  auto add_example_options = [&](CLI::App* cmd) {
    cmd->add_option("-n,--n", ex.n, "segments per side")->capture_default_str();
    cmd->add_flag("--paper-scale", paper_scale, "use n = 64");
    cmd->add_option("--dt", ex.dt)->capture_default_str();
    cmd->add_option("--t-max", ex.t_max)->capture_default_str();
    cmd->add_option("--tolerance", ex.tolerance)->capture_default_str();
    cmd->add_option("--lid-ramp", ex.lid_ramp)->capture_default_str();
    cmd->add_option("-o,--output-dir", ex.output_dir)->capture_default_str();
    cmd->add_option("--progress", ex.progress_every, "report every N steps");
    cmd->add_flag("--fresh", fresh, "ignore existing stationary checkpoints");
  };
  auto* ex1_cmd = app.add_subcommand("example1", "equilateral cavity experiments");
  add_example_options(ex1_cmd);
  ex1_cmd->add_option("--stage", stage, "star | hysteresis | ladder")->capture_default_str();
  ex1_cmd->add_option("--hysteresis-dt", ex.hysteresis_dt)->capture_default_str();
  auto* ex2_cmd = app.add_subcommand("example2", "isosceles cavity at Re = 200, 400");
  add_example_options(ex2_cmd);
  ex2_cmd->add_option("--iso-base", ex.iso_base)->capture_default_str();
  ex2_cmd->add_option("--iso-height", ex.iso_height)->capture_default_str();

  // converge
  auto* conv_cmd = app.add_subcommand("converge", "manufactured-solution convergence study");
  std::string solution = "trig", levels_text = "8,16,32", dt_list;
  double nu = 1.0, amplitude = 1.0, t_final = 1.0;
  int dt_study_n = 32;
  conv_cmd->add_option("--solution", solution, "trig | constant")->capture_default_str();
  conv_cmd->add_option("--nu", nu)->capture_default_str();
  conv_cmd->add_option("--amplitude", amplitude)->capture_default_str();
  conv_cmd->add_option("--t-final", t_final)->capture_default_str();
  conv_cmd->add_option("--levels", levels_text, "mesh resolutions n (h = 1/n), dt = h^2")->capture_default_str();
  conv_cmd->add_option("--dt-study", dt_list, "comma-separated dt values at fixed n (e.g. 1/64,1/128,1/256)");
  conv_cmd->add_option("--dt-study-n", dt_study_n)->capture_default_str();

  // compare-quadrature
  auto* cq_cmd = app.add_subcommand("compare-quadrature", "exact vs quadrature composite term (report only)");
  ConfigFlags cq_flags;
  cq_flags.attach(cq_cmd);
  std::string orders_text = "1,2,4,5";
  cq_cmd->add_option("--orders", orders_text, "quadrature degrees")->capture_default_str();

  // post
  auto* post_cmd = app.add_subcommand("post", "stream function, contours and stagnation point of a checkpoint");
  ConfigFlags post_flags;
  post_flags.attach(post_cmd);
  std::string post_checkpoint, svg_path, vtk_path;
  int levels_per_sign = 10;
  bool linear_vtk = false;
  post_cmd->add_option("file", post_checkpoint, "checkpoint file")->required();
  post_cmd->add_option("--svg", svg_path, "write streamlines");
  post_cmd->add_option("--vtk", vtk_path, "write fields");
  post_cmd->add_option("--levels-per-sign", levels_per_sign)->capture_default_str();
  post_cmd->add_flag("--linear-vtk", linear_vtk, "subdivide into linear cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : kExitError;
  }

  auto log = [&](const std::string& s) { out << s << std::endl; };
  try {
    if (*mesh_cmd) {
      std::optional<Mesh> mesh;
      if (!mesh_in.empty()) {
        std::vector<std::string> warnings;
        mesh = read_mesh_file(mesh_in, {}, &warnings);
        for (const auto& w : warnings) err << "warning: " << w << '\n';
      } else {
        DomainPreset d;
        if (mesh_domain == "equilateral") d = DomainPreset::equilateral();
        else if (mesh_domain == "isosceles") d = DomainPreset::isosceles(iso_base, iso_height);
        else if (mesh_domain == "square") d = DomainPreset::unit_square();
        else throw ConfigurationError("domain must be equilateral, isosceles or square");
        mesh = generate_cavity_mesh(d, mesh_n);
      }
      int lid = 0;
      for (const auto& e : mesh->boundary_edges()) lid += e.label == kLid;
      out << "vertices " << mesh->num_vertices() << "\nelements " << mesh->num_elements() << "\nboundary edges "
          << mesh->boundary_edges().size() << " (" << lid << " lid)\nh " << format_double(mesh->h())
          << "\nmin angle " << format_double(mesh->min_angle()) << "\narea " << format_double(mesh->total_area())
          << "\nhash " << hex64(mesh->hash()) << '\n';
      if (!mesh_out.empty()) write_mesh_file(mesh_out, *mesh);
      return 0;
    }
    if (*run_cmd) return finish_run(out, run_flags.build());
    if (*resume_cmd) {
      ConfigFlags flags = resume_flags;
      flags.values["initial"] = "resume";
      const SimulationConfig config = flags.build();
      return finish_run(out, config);
    }
    if (*ex1_cmd || *ex2_cmd) {
      if (paper_scale) ex.n = 64;
      ex.reuse_checkpoints = !fresh;
      ex.log = log;
      const ExperimentOutcome o = *ex1_cmd ? run_example1(parse_stage(stage), ex) : run_example2(ex);
      print_outcome(out, o);
      if (*ex1_cmd && parse_stage(stage) == Example1Stage::Hysteresis) {
        out << "relative L2 distance of u** to u*(" << format_double(ex.hysteresis_from_re)
            << "): " << format_double(o.distance_to_from) << "\nrelative L2 distance of u** to u*("
            << format_double(ex.hysteresis_re) << "): " << format_double(o.distance_to_star) << '\n';
      }
      return o.all_converged ? 0 : kExitUnconverged;
    }
    if (*conv_cmd) {
      const ManufacturedSolution ms = manufactured_by_id(solution, nu, amplitude);
      std::vector<int> ns;
      for (double v : parse_list(levels_text)) ns.push_back(static_cast<int>(v));
      const ConvergenceReport report = convergence_study(ms, ns, [](double h) { return h * h; }, t_final, log);
      out << "velocity l-inf(H1) slope " << format_double(report.velocity_fit.slope) << ", fit residuals";
      for (double r : report.velocity_fit.residuals) out << ' ' << format_double(r);
      out << "\npressure l2(L2) slope " << format_double(report.pressure_fit.slope) << ", fit residuals";
      for (double r : report.pressure_fit.residuals) out << ' ' << format_double(r);
      out << '\n';
      if (!dt_list.empty()) {
        const auto levels = time_step_study(ms, dt_study_n, parse_list(dt_list), t_final, log);
        for (std::size_t i = 1; i < levels.size(); ++i)
          out << "dt " << format_double(levels[i - 1].dt) << " -> " << format_double(levels[i].dt)
              << ": velocity ratio " << format_double(levels[i - 1].velocity_error / levels[i].velocity_error)
              << ", pressure ratio " << format_double(levels[i - 1].pressure_error / levels[i].pressure_error) << '\n';
      }
      return 0;
    }
    if (*cq_cmd) {
      SimulationConfig config = cq_flags.build();
      if (config.max_steps == 0) config.max_steps = 200;
      std::vector<int> orders;
      for (double v : parse_list(orders_text)) orders.push_back(static_cast<int>(v));
      const QuadratureComparison c = compare_quadrature(config, orders, log);
      for (std::size_t i = 0; i < c.variants.size(); ++i) {
        const auto& v = c.variants[i];
        out << v.label << ": " << (v.blew_up ? "blow-up" : "bounded") << ", max deviation from exact "
            << format_double(c.max_deviation[i]);
        if (!v.divergence.empty()) out << ", final divergence residual " << format_double(v.divergence.back());
        out << '\n';
      }
      return 0;
    }
    if (*post_cmd) {
      const SimulationConfig config = post_flags.build();
      Simulation sim(config);
      const Checkpoint cp = read_checkpoint_file(post_checkpoint);
      const SimulationState state = sim.from_checkpoint(cp);
      const ScalarP2Field psi = compute_stream_function(state.u);
      const auto contours = extract_contours(psi, default_contour_levels(psi, levels_per_sign));
      out << "contours " << contours.size() << '\n';
      if (!svg_path.empty()) export_svg(svg_path, sim.discretization().mesh(), contours);
      if (!vtk_path.empty()) {
        const ScalarP2Field omega = compute_vorticity(state.u);
        export_vtk(vtk_path, sim.discretization().velocity_dofs(), &state.u, &state.p,
                   {{"stream_function", &psi}, {"vorticity", &omega}}, VtkOptions{linear_vtk});
      }
      if (config.domain.kind != DomainKind::UnitSquare) {
        const auto st = find_stagnation_point(psi, config.domain.left_side(), cp.re, Branch::Star);
        if (st)
          out << "stagnation node " << st->node << " at (" << format_double(st->x.x1) << ", "
              << format_double(st->x.x2) << ")\n";
        else
          out << "no stagnation point\n";
        if (config.domain.kind != DomainKind::Triangle)
          out << "literature Re " << format_double(reynolds_rescale(cp.re, config.domain.kind)) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}

}  // namespace lgllv
