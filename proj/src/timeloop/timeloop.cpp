#include "lgllv/timeloop/timeloop.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lgllv/util/format.hpp"
#include "lgllv/util/hash.hpp"

namespace lgllv {

void SimulationConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigurationError(what);
  };
  require(std::isfinite(re) && re > 0.0, "re must be positive");
  require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
  require(t_max > 0.0, "t_max must be positive");
  require(max_steps >= 0, "max_steps must be non-negative");
  require(n >= 2, "n must be at least 2");
  require(lid_ramp > 0.0 && lid_ramp <= 0.5, "lid_ramp must lie in (0, 1/2]");
  require(tolerance >= 0.0, "tolerance must be non-negative");
  require(mode.exact || mode.quadrature_degree >= 1, "quadrature_order must be at least 1");
  require(max_halvings >= 0, "max_halvings must be non-negative");
  require((initial != InitialKind::Checkpoint && initial != InitialKind::Resume) || !checkpoint_path.empty(),
          "initial state from a checkpoint needs checkpoint path");
}

std::uint64_t SimulationConfig::hash() const {
  Fnv1a h;
  h.add(re);
  h.add(dt);
  h.add(n);
  h.add(static_cast<int>(domain.kind));
  for (const Point& c : domain.corners) {
    h.add(c.x1);
    h.add(c.x2);
  }
  h.add(lid_ramp);
  h.add(static_cast<int>(boundary));
  h.add(mode.exact ? 0 : mode.quadrature_degree);
  h.add(static_cast<int>(static_cast<bool>(source)));
  return h.value();
}

Discretization::Discretization(Mesh mesh)
    : mesh_(std::move(mesh)),
      vdofs_(mesh_),
      pdofs_(mesh_),
      locator_(mesh_),
      integrator_(vdofs_, locator_),
      divergence_(assemble_divergence(vdofs_, pdofs_)),
      mean_constraint_(mean_pressure_constraint(pdofs_)) {}

std::shared_ptr<const Discretization> make_discretization(const SimulationConfig& config) {
  return std::make_shared<const Discretization>(generate_cavity_mesh(config.domain, config.n));
}

SimulationState SimulationState::zero(const Discretization& disc) {
  return {0, 0.0, VelocityField(disc.velocity_dofs()), PressureField(disc.pressure_dofs())};
}

DirichletData boundary_data(const SimulationConfig& config, const Discretization& disc) {
  if (config.boundary == BoundaryKind::Lid) return lid_driven_dirichlet(disc.velocity_dofs(), LidProfile{config.lid_ramp});
  if (config.boundary == BoundaryKind::Function) {
    if (!config.boundary_velocity) throw ConfigurationError("boundary velocity function is not set");
    return dirichlet_from_function(disc.velocity_dofs(), config.boundary_velocity);
  }
  return dirichlet_from_function(disc.velocity_dofs(), [](const Point&) { return Point{}; });
}

Stepper::Stepper(std::shared_ptr<const Discretization> disc, double nu, double dt, DirichletData bc,
                 VectorFunction source, CompositeMode mode, SolverKind solver)
    : disc_(std::move(disc)), nu_(nu), dt_(dt), source_(std::move(source)), mode_(mode), fact_([&] {
        const VelocityDofMap& vdofs = disc_->velocity_dofs();
        SparseMatrix k = assemble_velocity_mass(vdofs) * (1.0 / dt) + assemble_stiffness(vdofs, nu);
        system_ = build_saddle_system(k, disc_->divergence(), &disc_->mean_constraint());
        apply_dirichlet(system_, bc);
        return factorize(system_, solver);
      }()) {}

SimulationState Stepper::step(const SimulationState& state, StepDiagnostics* diag) const {
  const Discretization& d = *disc_;
  const long next_step = state.step + 1;
  const double next_time = static_cast<double>(next_step) * dt_;
  RhsStats stats;
  const Vector load = assemble_rhs(d.integrator(), state.u, dt_, source_ ? &source_ : nullptr, next_time, mode_, &stats);
  const Vector rhs = system_.rhs(load);
  StepSolution sol = solve_step(fact_, system_, rhs, d.velocity_dofs(), d.pressure_dofs());
  if (diag) {
    diag->rhs = stats;
    diag->residual = sol.residual;
    const Eigen::Map<const Vector> u(sol.u.values().data(), sol.u.values().size());
    const Eigen::Map<const Vector> p(sol.p.values().data(), sol.p.values().size());
    diag->divergence_max = (d.divergence() * u).cwiseAbs().maxCoeff();
    diag->pressure_integral = d.mean_constraint().dot(p);
  }
  return {next_step, next_time, std::move(sol.u), std::move(sol.p)};
}

StationarityRates stationarity_rate(const SimulationState& prev, const SimulationState& next, double dt) {
  auto max_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("stationarity_rate: inconsistent dof maps");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };
  return {max_diff(prev.u.values(), next.u.values()) / dt, max_diff(prev.p.values(), next.p.values()) / dt};
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "step,time,rate_u,rate_p,kinetic_energy,out_of_domain\n";
  for (const auto& r : rows)
    out << r.step << ',' << format_double(r.time) << ',' << format_double(r.rate_u) << ',' << format_double(r.rate_p)
        << ',' << format_double(r.kinetic_energy) << ',' << r.out_of_domain << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Simulation::Simulation(SimulationConfig config, std::shared_ptr<const Discretization> disc)
    : config_(std::move(config)), disc_(std::move(disc)) {
  config_.validate();
  if (!disc_) disc_ = make_discretization(config_);
}

Checkpoint Simulation::to_checkpoint(const SimulationState& state, double dt) const {
  Checkpoint cp;
  cp.step = state.step;
  cp.time = state.time;
  cp.re = config_.re;
  cp.dt = dt;
  cp.mesh_hash = disc_->mesh().hash();
  cp.config_hash = config_.hash();
  cp.velocity = state.u.values();
  cp.pressure = state.p.values();
  return cp;
}

SimulationState Simulation::from_checkpoint(const Checkpoint& cp) const {
  if (cp.mesh_hash != disc_->mesh().hash())
    throw CheckpointError("checkpoint mesh hash " + hex64(cp.mesh_hash) + " does not match the configured mesh " +
                          hex64(disc_->mesh().hash()));
  if (cp.velocity.size() != static_cast<std::size_t>(disc_->velocity_dofs().num_dofs()) ||
      cp.pressure.size() != static_cast<std::size_t>(disc_->pressure_dofs().num_dofs()))
    throw CheckpointError("checkpoint dof counts do not match the configured mesh");
  return {cp.step, cp.time, VelocityField(disc_->velocity_dofs(), cp.velocity),
          PressureField(disc_->pressure_dofs(), cp.pressure)};
}

SimulationState Simulation::initial_state() const {
  const Discretization& d = *disc_;
  switch (config_.initial) {
    case InitialKind::Zero:
      return SimulationState::zero(d);
    case InitialKind::Checkpoint: {
      SimulationState s = from_checkpoint(read_checkpoint_file(config_.checkpoint_path));
      s.step = 0;
      s.time = 0.0;
      return s;
    }
    case InitialKind::Resume: {
      const Checkpoint cp = read_checkpoint_file(config_.checkpoint_path);
      if (cp.config_hash != config_.hash())
        throw CheckpointError("cannot resume '" + config_.checkpoint_path + "': config hash " + hex64(cp.config_hash) +
                              " differs from " + hex64(config_.hash()));
      return from_checkpoint(cp);
    }
    case InitialKind::Stokes: {
      auto [u, p] = config_.initial_velocity
                        ? stokes_projection(d.velocity_dofs(), d.pressure_dofs(), config_.initial_velocity, 1.0,
                                            config_.solver)
                        : stokes_projection(VelocityField(d.velocity_dofs()), d.pressure_dofs(),
                                            boundary_data(config_, d), 1.0, config_.solver);
      return {0, 0.0, std::move(u), std::move(p)};
    }
  }
  throw ConfigurationError("unknown initial-state kind");
}

RunResult Simulation::run(const StepObserver& observer) const { return run_from(initial_state(), observer); }

RunResult Simulation::run_from(SimulationState initial, const StepObserver& observer) const {
  const SimulationConfig& cfg = config_;
  double dt = cfg.dt;
  if (cfg.initial == InitialKind::Resume) dt = read_checkpoint_file(cfg.checkpoint_path).dt;

  const bool write_files = !cfg.output_dir.empty();
  if (write_files) std::filesystem::create_directories(cfg.output_dir);
  auto out_path = [&](const std::string& suffix) {
    return (std::filesystem::path(cfg.output_dir) / (cfg.run_name + suffix)).string();
  };

  const DirichletData bc = boundary_data(cfg, *disc_);
  auto make_stepper = [&](double step_dt) {
    return std::make_unique<Stepper>(disc_, cfg.nu(), step_dt, bc, cfg.source, cfg.mode, cfg.solver);
  };
  auto stepper = make_stepper(dt);

  RunResult result{std::move(initial), {}, {}, 0.0, 0, 0, {}};
  SimulationState& state = result.state;
  result.initial_hash = to_checkpoint(state, dt).field_hash();

  auto kinetic = [](const VelocityField& u) {
    const double l2 = norm_l2(u);
    return 0.5 * l2 * l2;
  };
  TraceRow row0{state.step, state.time, 0.0, 0.0, kinetic(state.u), 0};
  if (observer) observer(state, row0, StepDiagnostics{});

  int halvings = 0;
  const double time_eps = 1e-12 * std::max(1.0, cfg.t_max);
  long steps_taken = 0;
  while (state.time < cfg.t_max - time_eps && (cfg.max_steps == 0 || steps_taken < cfg.max_steps)) {
    StepDiagnostics diag;
    std::optional<SimulationState> next;
    try {
      next = stepper->step(state, &diag);
    } catch (const NonInjectiveMap&) {
      if (!cfg.auto_halve_dt || halvings >= cfg.max_halvings) throw;
      ++halvings;
      dt *= 0.5;
      // Keep t^n = n dt under the new step size.
      state.step *= 2;
      stepper = make_stepper(dt);
      continue;
    }
    ++steps_taken;
    const StationarityRates rates = stationarity_rate(state, *next, dt);
    state = std::move(*next);
    result.report.rate_u.push_back(rates.u);
    result.report.rate_p.push_back(rates.p);
    TraceRow row{state.step, state.time, rates.u, rates.p, kinetic(state.u), diag.rhs.out_of_domain_elements};
    result.trace.push_back(row);
    if (observer) observer(state, row, diag);

    if (write_files && cfg.checkpoint_every > 0 && state.step % cfg.checkpoint_every == 0)
      write_checkpoint_file(out_path("_step" + std::to_string(state.step) + ".chk"), to_checkpoint(state, dt));

    if (rates.u < cfg.tolerance && rates.p < cfg.tolerance) {
      result.report.converged = true;
      result.report.converged_step = state.step;
      break;
    }
  }

  result.dt = dt;
  Checkpoint final_cp = to_checkpoint(state, dt);
  final_cp.stationary = result.report.converged;
  result.final_hash = final_cp.field_hash();
  if (write_files) {
    result.final_checkpoint = out_path("_final.chk");
    write_checkpoint_file(result.final_checkpoint, final_cp);
    write_trace_csv(out_path("_trace.csv"), result.trace);
  }
  return result;
}

std::vector<RunResult> continuation_ladder(const SimulationConfig& config, const std::vector<double>& re_list,
                                           bool stop_on_unconverged, const StepObserver& observer) {
  for (std::size_t i = 1; i < re_list.size(); ++i)
    if (!(re_list[i] > re_list[i - 1])) throw ConfigurationError("continuation ladder Re list must increase");
  std::vector<RunResult> out;
  std::shared_ptr<const Discretization> disc;
  for (std::size_t i = 0; i < re_list.size(); ++i) {
    SimulationConfig rung = config;
    rung.re = re_list[i];
    rung.run_name = config.run_name + "_re" + format_double(re_list[i]);
    Simulation sim(rung, disc);
    disc = sim.shared_discretization();
    SimulationState initial = SimulationState::zero(*disc);
    if (i == 0) {
      initial = sim.initial_state();
    } else {
      initial.u = out.back().state.u;
      initial.p = out.back().state.p;
    }
    out.push_back(sim.run_from(std::move(initial), observer));
    if (stop_on_unconverged && !out.back().report.converged) break;
  }
  return out;
}

}  // namespace lgllv
