#include "lgllv/cli/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "lgllv/util/format.hpp"

namespace lgllv {

namespace {

void say(const LogFunction& log, const std::string& msg) {
  if (log) log(msg);
}

}  // namespace

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("fit_loglog: at least 3 points are required");
  const std::size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_loglog: data must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog: x values must differ");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < m; ++i) fit.residuals.push_back(ly[i] - (fit.intercept + fit.slope * lx[i]));
  return fit;
}

ConvergenceLevel run_manufactured(const ManufacturedSolution& ms, int n, double dt, double t_final,
                                  const CompositeMode& mode) {
  const auto start = std::chrono::steady_clock::now();
  SimulationConfig c;
  c.re = 1.0 / ms.nu;
  c.dt = dt;
  c.n = n;
  c.domain = ms.domain;
  c.mode = mode;
  c.tolerance = 0.0;  // fixed horizon
  c.max_steps = static_cast<long>(std::floor(t_final / dt + 1e-9));
  c.t_max = 2.0 * t_final + dt;
  c.source = ms.f;
  c.initial = InitialKind::Stokes;
  auto u = ms.u;
  c.initial_velocity = [u](const Point& x) { return u(x, 0.0); };
  if (ms.zero_trace) {
    c.boundary = BoundaryKind::NoSlip;
  } else {
    if (!ms.steady) throw std::invalid_argument("time-dependent boundary data is not supported");
    c.boundary = BoundaryKind::Function;
    c.boundary_velocity = c.initial_velocity;
  }

  Simulation sim(c);
  const Discretization& d = sim.discretization();
  TimeSeriesAccumulator velocity(dt), pressure(dt);
  auto p = ms.p;
  sim.run([&](const SimulationState& s, const TraceRow&, const StepDiagnostics&) {
    const double t = s.time;
    const VelocityField ui = interpolate_velocity(d.velocity_dofs(), [&](const Point& x) { return u(x, t); });
    const PressureField pi = interpolate_pressure(d.pressure_dofs(), [&](const Point& x) { return p(x, t); });
    const VelocityField eu = s.u - ui;
    const PressureField ep = s.p - pi;
    velocity.add(s.step, norm_h1(eu), 0.0);
    pressure.add(s.step, 0.0, norm_l2(ep));
  });

  ConvergenceLevel level;
  level.n = n;
  level.h = 1.0 / n;
  level.dt = dt;
  level.steps = c.max_steps;
  level.velocity_error = velocity.result().linf_h1;
  level.pressure_error = pressure.result().l2_l2;
  level.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return level;
}

ConvergenceReport convergence_study(const ManufacturedSolution& ms, const std::vector<int>& ns,
                                    const std::function<double(double h)>& dt_rule, double t_final,
                                    const LogFunction& log) {
  if (ns.size() < 3) throw std::invalid_argument("convergence study needs at least 3 refinement levels");
  ConvergenceReport report;
  std::vector<double> hs, eu, ep;
  for (int n : ns) {
    const double h = 1.0 / n;
    ConvergenceLevel level = run_manufactured(ms, n, dt_rule(h), t_final);
    say(log, "n=" + std::to_string(n) + " dt=" + format_double(level.dt) + " steps=" + std::to_string(level.steps) +
                 " velocity=" + format_double(level.velocity_error) +
                 " pressure=" + format_double(level.pressure_error) + " (" + format_double(level.seconds) + " s)");
    hs.push_back(h);
    eu.push_back(level.velocity_error);
    ep.push_back(level.pressure_error);
    report.levels.push_back(level);
  }
  report.velocity_fit = fit_loglog(hs, eu);
  report.pressure_fit = fit_loglog(hs, ep);
  return report;
}

std::vector<ConvergenceLevel> time_step_study(const ManufacturedSolution& ms, int n, const std::vector<double>& dts,
                                              double t_final, const LogFunction& log) {
  std::vector<ConvergenceLevel> out;
  for (double dt : dts) {
    out.push_back(run_manufactured(ms, n, dt, t_final));
    const auto& level = out.back();
    say(log, "n=" + std::to_string(n) + " dt=" + format_double(dt) + " velocity=" +
                 format_double(level.velocity_error) + " pressure=" + format_double(level.pressure_error));
  }
  return out;
}

Example1Stage parse_stage(const std::string& s) {
  if (s == "star") return Example1Stage::Star;
  if (s == "hysteresis") return Example1Stage::Hysteresis;
  if (s == "ladder") return Example1Stage::Ladder;
  throw std::invalid_argument("unknown stage '" + s + "' (expected star, hysteresis or ladder)");
}

double relative_l2_distance(const VelocityField& a, const VelocityField& b) {
  const double nb = norm_l2(b);
  const double d = norm_l2(a - b);
  return nb > 0.0 ? d / nb : d;
}

namespace {

class ExperimentRunner {
 public:
  ExperimentRunner(const ExampleOptions& options, DomainPreset domain) : opt_(options), domain_(domain) {
    std::filesystem::create_directories(opt_.output_dir);
    SimulationConfig c = base_config(opt_.dt, 1.0);
    disc_ = make_discretization(c);
  }

  struct Stationary {
    RunSummary summary;
    SimulationState state;
  };

  /// Runs (or reuses) the stationary solution `name` at (re, dt) from
  /// `initial` (zero when null).
  Stationary obtain(const std::string& name, double re, double dt, const SimulationState* initial, Branch branch) {
    SimulationConfig c = base_config(dt, re);
    c.run_name = name;
    Simulation sim(c, disc_);
    const std::string path = (std::filesystem::path(opt_.output_dir) / (name + "_final.chk")).string();

    RunSummary s;
    s.name = name;
    s.re = re;
    s.dt = dt;
    std::optional<SimulationState> state;
    if (opt_.reuse_checkpoints && std::filesystem::exists(path)) {
      try {
        const Checkpoint cp = read_checkpoint_file(path);
        if (cp.stationary && cp.config_hash == c.hash()) {
          state = sim.from_checkpoint(cp);
          s.converged = true;
          s.reused = true;
          s.steps = cp.step;
          s.time = cp.time;
          s.checkpoint = path;
          say(opt_.log, name + ": reusing " + path);
        }
      } catch (const CheckpointError& e) {
        say(opt_.log, name + ": ignoring checkpoint (" + e.what() + ")");
      }
    }
    if (!state) {
      say(opt_.log, name + ": Re=" + format_double(re) + " dt=" + format_double(dt) +
                        (initial ? " from previous state" : " from rest"));
      StepObserver observer;
      if (opt_.progress_every > 0 && opt_.log) {
        observer = [this, name](const SimulationState& st, const TraceRow& row, const StepDiagnostics&) {
          if (st.step > 0 && st.step % opt_.progress_every == 0)
            opt_.log(name + ": step " + std::to_string(st.step) + " t=" + format_double(row.time) +
                     " rate_u=" + format_double(row.rate_u) + " rate_p=" + format_double(row.rate_p));
        };
      }
      // A continuation starts a new run at n = 0 from the given fields.
      SimulationState start = SimulationState::zero(*disc_);
      if (initial) {
        start.u = initial->u;
        start.p = initial->p;
      }
      RunResult r = sim.run_from(std::move(start), observer);
      s.converged = r.report.converged;
      s.steps = r.state.step;
      s.time = r.state.time;
      s.checkpoint = r.final_checkpoint;
      state = std::move(r.state);
      say(opt_.log, name + ": " + (s.converged ? "stationary" : "NOT stationary") + " after " +
                        std::to_string(s.steps) + " steps (t=" + format_double(s.time) + ")");
    }

    const ScalarP2Field psi = compute_stream_function(state->u);
    const auto contours = extract_contours(psi, default_contour_levels(psi));
    s.svg = (std::filesystem::path(opt_.output_dir) / (name + ".svg")).string();
    export_svg(s.svg, disc_->mesh(), contours);
    export_vtk((std::filesystem::path(opt_.output_dir) / (name + ".vtk")).string(), disc_->velocity_dofs(), &state->u,
               &state->p, {{"stream_function", &psi}});
    s.stagnation = find_stagnation_point(psi, domain_.left_side(), re, branch);
    return {std::move(s), std::move(*state)};
  }

  const Discretization& discretization() const { return *disc_; }

 private:
  SimulationConfig base_config(double dt, double re) const {
    SimulationConfig c;
    c.re = re;
    c.dt = dt;
    c.n = opt_.n;
    c.domain = domain_;
    c.lid_ramp = opt_.lid_ramp;
    c.tolerance = opt_.tolerance;
    c.t_max = opt_.t_max;
    c.output_dir = opt_.output_dir;
    return c;
  }

  const ExampleOptions& opt_;
  DomainPreset domain_;
  std::shared_ptr<const Discretization> disc_;
};

std::string re_tag(double re) { return "re" + format_double(re); }

void record(ExperimentOutcome& out, const RunSummary& s) {
  out.all_converged = out.all_converged && s.converged;
  if (s.stagnation) out.stagnation.push_back(*s.stagnation);
  out.runs.push_back(s);
}

}  // namespace

ExperimentOutcome run_example1(Example1Stage stage, const ExampleOptions& options) {
  ExperimentRunner runner(options, DomainPreset::equilateral());
  ExperimentOutcome out;
  const std::filesystem::path dir(options.output_dir);

  switch (stage) {
    case Example1Stage::Star: {
      for (double re : options.star_re) record(out, runner.obtain("star_" + re_tag(re), re, options.dt, nullptr, Branch::Star).summary);
      export_stagnation_csv((dir / "star_stagnation.csv").string(), out.stagnation);
      break;
    }
    case Example1Stage::Hysteresis: {
      auto from = runner.obtain("star_" + re_tag(options.hysteresis_from_re), options.hysteresis_from_re, options.dt,
                                nullptr, Branch::Star);
      auto star = runner.obtain("star_" + re_tag(options.hysteresis_re), options.hysteresis_re, options.dt, nullptr,
                                Branch::Star);
      auto dstar = runner.obtain("dstar_" + re_tag(options.hysteresis_re), options.hysteresis_re,
                                 options.hysteresis_dt, &from.state, Branch::DoubleStar);
      auto coarse = runner.obtain("dstar_" + re_tag(options.hysteresis_re) + "_coarse_dt", options.hysteresis_re,
                                  options.dt, &from.state, Branch::DoubleStar);
      for (const auto* s : {&from, &star, &dstar, &coarse}) record(out, s->summary);
      out.distance_to_from = relative_l2_distance(dstar.state.u, from.state.u);
      out.distance_to_star = relative_l2_distance(dstar.state.u, star.state.u);
      out.coarse_distance_to_star = relative_l2_distance(coarse.state.u, star.state.u);
      say(options.log, "u**: distance to u*(" + format_double(options.hysteresis_from_re) +
                           ") = " + format_double(out.distance_to_from) + ", to u*(" +
                           format_double(options.hysteresis_re) + ") = " + format_double(out.distance_to_star));
      say(options.log, "coarse-dt continuation: distance to u*(" + format_double(options.hysteresis_re) +
                           ") = " + format_double(out.coarse_distance_to_star));
      export_stagnation_csv((dir / "hysteresis_stagnation.csv").string(), out.stagnation);
      break;
    }
    case Example1Stage::Ladder: {
      if (options.ladder_re.size() < 2) throw std::invalid_argument("ladder needs at least two Reynolds numbers");
      std::vector<SimulationState> star_states;
      for (double re : options.ladder_re) {
        auto s = runner.obtain("star_" + re_tag(re), re, options.dt, nullptr, Branch::Star);
        record(out, s.summary);
        star_states.push_back(std::move(s.state));
      }
      SimulationState previous = star_states.front();
      for (std::size_t i = 1; i < options.ladder_re.size(); ++i) {
        const double re = options.ladder_re[i];
        auto s = runner.obtain("dstar_" + re_tag(re), re, options.dt, &previous, Branch::DoubleStar);
        record(out, s.summary);
        previous = std::move(s.state);
      }
      export_stagnation_csv((dir / "ladder_stagnation.csv").string(), out.stagnation);
      break;
    }
  }
  return out;
}

ExperimentOutcome run_example2(const ExampleOptions& options) {
  for (double re : options.example2_re)
    if (!(re > 0.0)) throw ConfigurationError("re must be positive");
  ExperimentRunner runner(options, DomainPreset::isosceles(options.iso_base, options.iso_height));
  ExperimentOutcome out;
  for (double re : options.example2_re)
    record(out, runner.obtain("iso_" + re_tag(re), re, options.dt, nullptr, Branch::Star).summary);
  export_stagnation_csv((std::filesystem::path(options.output_dir) / "iso_stagnation.csv").string(), out.stagnation);
  return out;
}

QuadratureComparison compare_quadrature(SimulationConfig config, const std::vector<int>& orders,
                                        const LogFunction& log) {
  if (config.max_steps <= 0) throw ConfigurationError("compare_quadrature needs max_steps > 0");
  config.tolerance = 0.0;
  config.output_dir.clear();
  auto disc = make_discretization(config);

  struct Abort {};
  auto run_mode = [&](const CompositeMode& mode, const std::string& label, double limit) {
    ModeTrace trace;
    trace.label = label;
    SimulationConfig c = config;
    c.mode = mode;
    try {
      Simulation sim(c, disc);
      sim.run([&](const SimulationState& s, const TraceRow&, const StepDiagnostics& diag) {
        if (s.step == 0) return;
        double m = 0.0;
        bool finite = true;
        for (int i = 0; i < disc->velocity_dofs().num_nodes(); ++i) {
          const double v = norm(s.u.node_value(i));
          finite = finite && std::isfinite(v);
          m = std::max(m, v);
        }
        trace.max_velocity.push_back(m);
        trace.divergence.push_back(diag.divergence_max);
        if (!finite || m > limit) {
          trace.blew_up = true;
          throw Abort{};
        }
      });
    } catch (const Abort&) {
      trace.error = "nodal velocity exceeded 10x the exact-mode maximum";
    } catch (const std::exception& e) {
      trace.blew_up = true;
      trace.error = e.what();
    }
    say(log, label + ": " + std::to_string(trace.max_velocity.size()) + " steps" +
                 (trace.blew_up ? " (blow-up: " + trace.error + ")" : ""));
    return trace;
  };

  QuadratureComparison out;
  out.baseline = run_mode(CompositeMode{true, 4}, "exact", std::numeric_limits<double>::infinity());
  double base_max = 0.0;
  for (double v : out.baseline.max_velocity) base_max = std::max(base_max, v);
  for (int order : orders) {
    out.variants.push_back(run_mode(CompositeMode{false, order}, "quadrature(" + std::to_string(order) + ")",
                                    10.0 * std::max(base_max, 1e-300)));
    const auto& v = out.variants.back();
    double dev = 0.0;
    const std::size_t common = std::min(v.max_velocity.size(), out.baseline.max_velocity.size());
    for (std::size_t i = 0; i < common; ++i)
      dev = std::max(dev, std::abs(v.max_velocity[i] - out.baseline.max_velocity[i]));
    if (v.max_velocity.size() != out.baseline.max_velocity.size()) dev = std::numeric_limits<double>::infinity();
    out.max_deviation.push_back(dev);
  }
  return out;
}

}  // namespace lgllv
