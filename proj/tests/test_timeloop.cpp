#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "lgllv/timeloop/timeloop.hpp"

using namespace lgllv;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lgllv_test_timeloop_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

SimulationConfig small_cavity(int n = 8) {
  SimulationConfig c;
  c.n = n;
  c.re = 500;
  c.dt = 1.0 / 64;
  return c;
}

double max_abs_div(const Discretization& d, const VelocityField& u) {
  Vector bu = d.divergence() * Eigen::Map<const Vector>(u.values().data(), u.values().size());
  return bu.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("config validation") {
  SimulationConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.nu() == doctest::Approx(1.0 / 500));
  auto rejects = [](auto mutate, const std::string& key) {
    SimulationConfig bad;
    mutate(bad);
    try {
      bad.validate();
    } catch (const ConfigurationError& e) {
      CHECK(std::string(e.what()).rfind(key, 0) == 0);
      return;
    }
    FAIL("accepted an invalid config: " << key);
  };
  rejects([](SimulationConfig& s) { s.re = 0; }, "re");
  rejects([](SimulationConfig& s) { s.re = -1; }, "re");
  rejects([](SimulationConfig& s) { s.dt = 0; }, "dt");
  rejects([](SimulationConfig& s) { s.n = 1; }, "n");
  rejects([](SimulationConfig& s) { s.lid_ramp = 0; }, "lid_ramp");
  rejects([](SimulationConfig& s) { s.tolerance = -1; }, "tolerance");
  rejects([](SimulationConfig& s) { s.initial = InitialKind::Resume; }, "initial");
  CHECK_THROWS_AS(Simulation(SimulationConfig{.re = 0}), ConfigurationError);
}

TEST_CASE("config hash tracks the trajectory-defining fields") {
  SimulationConfig a, b;
  CHECK(a.hash() == b.hash());
  b.max_steps = 17;
  b.output_dir = "x";
  b.run_name = "other";
  CHECK(a.hash() == b.hash());
  b.re = 501;
  CHECK(a.hash() != b.hash());
  SimulationConfig c;
  c.dt = 1.0 / 128;
  CHECK(a.hash() != c.hash());
}

TEST_CASE("stationarity rate") {
  SimulationConfig cfg = small_cavity(4);
  auto disc = make_discretization(cfg);
  SimulationState a = SimulationState::zero(*disc), b = SimulationState::zero(*disc);
  auto r0 = stationarity_rate(a, b, 0.25);
  CHECK(r0.u == 0.0);
  CHECK(r0.p == 0.0);
  b.u.values()[17] = -0.3;  // a midpoint or vertex dof, either component counts
  b.p.values()[2] = 0.05;
  auto r = stationarity_rate(a, b, 0.25);
  CHECK(r.u == doctest::Approx(1.2));
  CHECK(r.p == doctest::Approx(0.2));
}

TEST_CASE("zero state is a fixed point") {
  SimulationConfig cfg = small_cavity(6);
  cfg.boundary = BoundaryKind::NoSlip;
  auto disc = make_discretization(cfg);
  Stepper stepper(disc, cfg.nu(), cfg.dt, boundary_data(cfg, *disc));
  SimulationState s = SimulationState::zero(*disc);
  for (int i = 0; i < 5; ++i) {
    s = stepper.step(s);
    for (double v : s.u.values()) REQUIRE(v == 0.0);
    for (double v : s.p.values()) REQUIRE(v == 0.0);
  }
  CHECK(s.step == 5);
  CHECK(s.time == 5 * cfg.dt);
}

TEST_CASE("zero-data run converges at step 1") {
  SimulationConfig cfg = small_cavity(4);
  cfg.boundary = BoundaryKind::NoSlip;
  auto r = Simulation(cfg).run();
  CHECK(r.report.converged);
  CHECK(r.report.converged_step == 1);
  CHECK(r.state.step == 1);
}

TEST_CASE("one step from an arbitrary state is divergence free") {
  SimulationConfig cfg = small_cavity(8);
  auto disc = make_discretization(cfg);
  Stepper stepper(disc, cfg.nu(), cfg.dt, boundary_data(cfg, *disc));
  SimulationState s = SimulationState::zero(*disc);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (double& v : s.u.values()) v = u(rng);
  for (double& v : s.p.values()) v = u(rng);
  StepDiagnostics diag;
  SimulationState next = stepper.step(s, &diag);
  CHECK(max_abs_div(*disc, next.u) <= 1e-10);
  CHECK(diag.divergence_max <= 1e-10);
  CHECK(std::fabs(diag.pressure_integral) <= 1e-12);
  CHECK(diag.residual <= 1e-10);
  CHECK(next.step == 1);
}

TEST_CASE("rates decay monotonically in the Stokes limit") {
  // Re = 1 with no-slip walls: the flow decays from the Stokes projection of
  // a swirl and the per-step change shrinks.
  SimulationConfig cfg;
  cfg.n = 8;
  cfg.re = 1;
  cfg.dt = 1.0 / 32;
  cfg.boundary = BoundaryKind::NoSlip;
  cfg.initial = InitialKind::Stokes;
  cfg.tolerance = 0;
  cfg.max_steps = 12;
  cfg.initial_velocity = [](const Point& x) { return Point{-(x.x2 + 0.3), x.x1 - 0.5}; };
  auto r = Simulation(cfg).run();
  REQUIRE(r.report.rate_u.size() == 12);
  for (std::size_t i = 1; i < r.report.rate_u.size(); ++i) {
    CHECK(r.report.rate_u[i] < r.report.rate_u[i - 1]);
    CHECK(r.trace[i].kinetic_energy < r.trace[i - 1].kinetic_energy);
  }
  for (std::size_t i = 2; i < r.report.rate_p.size(); ++i) CHECK(r.report.rate_p[i] < r.report.rate_p[i - 1]);
}

TEST_CASE("observer sees the initial state and every step") {
  SimulationConfig cfg = small_cavity(4);
  cfg.max_steps = 7;
  std::vector<long> steps;
  auto r = Simulation(cfg).run([&](const SimulationState& s, const TraceRow& row, const StepDiagnostics&) {
    CHECK(row.step == s.step);
    CHECK(row.time == doctest::Approx(s.step * cfg.dt));
    steps.push_back(s.step);
  });
  CHECK(steps == std::vector<long>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(r.trace.size() == 7);
  CHECK_FALSE(r.report.converged);
  CHECK(r.state.time == doctest::Approx(7 * cfg.dt));
}

TEST_CASE("t_max stops the run") {
  SimulationConfig cfg = small_cavity(4);
  cfg.t_max = 0.25;
  auto r = Simulation(cfg).run();
  CHECK(r.state.step == 16);
  CHECK_FALSE(r.report.converged);
}

TEST_CASE("restart from a checkpoint equals the unsplit run") {
  auto dir = scratch_dir("restart");
  SimulationConfig cfg = small_cavity(8);
  cfg.max_steps = 40;
  auto whole = Simulation(cfg).run();

  SimulationConfig first = cfg;
  first.max_steps = 20;
  first.output_dir = dir.string();
  first.run_name = "half";
  auto a = Simulation(first).run();
  REQUIRE(fs::exists(a.final_checkpoint));

  SimulationConfig second = cfg;
  second.max_steps = 20;
  second.initial = InitialKind::Resume;
  second.checkpoint_path = a.final_checkpoint;
  auto b = Simulation(second).run();
  CHECK(b.state.step == 40);
  CHECK(b.initial_hash == a.final_hash);
  for (std::size_t i = 0; i < whole.state.u.values().size(); ++i)
    CHECK(std::fabs(b.state.u.values()[i] - whole.state.u.values()[i]) <= 1e-14);
  for (std::size_t i = 0; i < whole.state.p.values().size(); ++i)
    CHECK(std::fabs(b.state.p.values()[i] - whole.state.p.values()[i]) <= 1e-14);
  CHECK(b.final_hash == whole.final_hash);
}

TEST_CASE("resume refuses a different configuration") {
  auto dir = scratch_dir("resume");
  SimulationConfig cfg = small_cavity(4);
  cfg.max_steps = 3;
  cfg.output_dir = dir.string();
  auto a = Simulation(cfg).run();
  SimulationConfig other = small_cavity(4);
  other.re = 600;
  other.initial = InitialKind::Resume;
  other.checkpoint_path = a.final_checkpoint;
  CHECK_THROWS_AS(Simulation(other).run(), CheckpointError);
  // As plain initial data the fields are accepted and the clock restarts.
  other.initial = InitialKind::Checkpoint;
  Simulation sim(other);
  auto s = sim.initial_state();
  CHECK(s.step == 0);
  CHECK(s.u.values() == a.state.u.values());
  // A different mesh is rejected.
  SimulationConfig finer = other;
  finer.n = 5;
  CHECK_THROWS_AS(Simulation(finer).initial_state(), CheckpointError);
}

TEST_CASE("output files") {
  auto dir = scratch_dir("files");
  SimulationConfig cfg = small_cavity(4);
  cfg.max_steps = 6;
  cfg.checkpoint_every = 3;
  cfg.output_dir = dir.string();
  cfg.run_name = "demo";
  auto r = Simulation(cfg).run();
  CHECK(fs::exists(dir / "demo_step3.chk"));
  CHECK(fs::exists(dir / "demo_step6.chk"));
  CHECK(fs::exists(dir / "demo_final.chk"));
  auto cp = read_checkpoint_file((dir / "demo_final.chk").string());
  CHECK_FALSE(cp.stationary);
  CHECK(cp.step == 6);
  CHECK(cp.config_hash == cfg.hash());
  std::ifstream trace(dir / "demo_trace.csv");
  std::string line;
  int lines = 0;
  while (std::getline(trace, line)) ++lines;
  CHECK(lines == 7);
}

TEST_CASE("continuation ladder") {
  SimulationConfig cfg = small_cavity(4);
  cfg.max_steps = 10;
  auto single = Simulation([&] {
                  SimulationConfig c = cfg;
                  c.re = 1500;
                  return c;
                }())
                    .run();
  auto one = continuation_ladder(cfg, {1500});
  REQUIRE(one.size() == 1);
  CHECK(one[0].state.u.values() == single.state.u.values());

  auto two = continuation_ladder(cfg, {1500, 1550});
  REQUIRE(two.size() == 2);
  CHECK(two[1].initial_hash == two[0].final_hash);
  CHECK(two[1].state.step == 10);
  CHECK_THROWS_AS(continuation_ladder(cfg, {1550, 1500}), ConfigurationError);

  auto stopped = continuation_ladder(cfg, {1500, 1550, 1600}, true);
  CHECK(stopped.size() == 1);
}

TEST_CASE("folding step sizes fail or are halved on request") {
  SimulationConfig cfg;
  cfg.n = 8;
  cfg.re = 100;
  cfg.dt = 4.0;
  cfg.t_max = 8.0;
  cfg.max_steps = 2;
  cfg.boundary = BoundaryKind::Function;
  cfg.initial = InitialKind::Stokes;
  // A pure strain: x - dt u(x) reverses orientation once dt > 1.
  cfg.boundary_velocity = [](const Point& x) { return Point{x.x1 - 0.5, -x.x2}; };
  CHECK_THROWS_AS(Simulation(cfg).run(), NonInjectiveMap);
  cfg.auto_halve_dt = true;
  cfg.max_halvings = 10;
  auto r = Simulation(cfg).run();
  CHECK(r.dt < 1.0);
  CHECK(r.state.time == doctest::Approx(r.state.step * r.dt));
}
