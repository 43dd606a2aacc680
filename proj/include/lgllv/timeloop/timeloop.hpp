#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lgllv/assembly/assembly.hpp"
#include "lgllv/mesh/cavity_mesh.hpp"
#include "lgllv/mesh/point_locator.hpp"
#include "lgllv/solver/solver.hpp"
#include "lgllv/spaces/checkpoint.hpp"

namespace lgllv {

enum class InitialKind {
  Zero,
  /// Fields of a checkpoint used as u^0; the run starts at n = 0.
  Checkpoint,
  /// Continue a checkpointed run; its config hash must match.
  Resume,
  /// Stokes projection of `initial_velocity` (or of 0 with the run's
  /// boundary data when no callable is set).
  Stokes,
};

enum class BoundaryKind {
  /// Regularized lid speed on kLid edges, no-slip elsewhere.
  Lid,
  /// u = 0 on the whole boundary.
  NoSlip,
  /// u = boundary_velocity on the whole boundary.
  Function,
};

struct SimulationConfig {
  double re = 500.0;
  double dt = 1.0 / 64.0;
  double t_max = 400.0;
  long max_steps = 0;  // 0: no limit besides t_max
  int n = 32;
  DomainPreset domain = DomainPreset::equilateral();
  double lid_ramp = 1.0 / 16.0;
  double tolerance = 1e-4;
  BoundaryKind boundary = BoundaryKind::Lid;
  InitialKind initial = InitialKind::Zero;
  std::string checkpoint_path;
  std::function<Point(const Point&)> initial_velocity;
  std::function<Point(const Point&)> boundary_velocity;  // BoundaryKind::Function only
  VectorFunction source;  // f(x, t); empty means f = 0
  CompositeMode mode;
  SolverKind solver = SolverKind::Direct;
  long output_every = 0;      // observer cadence in steps (0: never)
  long checkpoint_every = 0;  // 0: only at the end of the run
  std::string output_dir;     // empty: no files
  std::string run_name = "run";
  bool auto_halve_dt = false;
  int max_halvings = 4;

  double nu() const { return 1.0 / re; }
  /// Throws ConfigurationError when an invariant is violated.
  void validate() const;
  /// Hash of the fields that determine the discrete trajectory.
  std::uint64_t hash() const;
};

/// Mesh plus everything derived from it that does not depend on Re or dt.
/// Not movable: the members refer to each other.
class Discretization {
 public:
  explicit Discretization(Mesh mesh);
  Discretization(const Discretization&) = delete;
  Discretization& operator=(const Discretization&) = delete;

  const Mesh& mesh() const { return mesh_; }
  const VelocityDofMap& velocity_dofs() const { return vdofs_; }
  const PressureDofMap& pressure_dofs() const { return pdofs_; }
  const PointLocator& locator() const { return locator_; }
  const CompositeIntegrator& integrator() const { return integrator_; }
  const SparseMatrix& divergence() const { return divergence_; }
  const Vector& mean_constraint() const { return mean_constraint_; }

 private:
  Mesh mesh_;
  VelocityDofMap vdofs_;
  PressureDofMap pdofs_;
  PointLocator locator_;
  CompositeIntegrator integrator_;
  SparseMatrix divergence_;
  Vector mean_constraint_;
};

std::shared_ptr<const Discretization> make_discretization(const SimulationConfig& config);

struct SimulationState {
  long step = 0;
  double time = 0.0;
  VelocityField u;
  PressureField p;

  static SimulationState zero(const Discretization& disc);
};

struct StepDiagnostics {
  RhsStats rhs;
  double residual = 0.0;
  double divergence_max = 0.0;  // max_i |b(u, psi_i)|
  double pressure_integral = 0.0;
};

/// One LG-LLV step for fixed (nu, dt, boundary data, source). Owns the
/// factorization of the constant saddle matrix.
class Stepper {
 public:
  Stepper(std::shared_ptr<const Discretization> disc, double nu, double dt, DirichletData bc,
          VectorFunction source = {}, CompositeMode mode = {}, SolverKind solver = SolverKind::Direct);

  /// Throws NonInjectiveMap when the characteristic map folds an element.
  SimulationState step(const SimulationState& state, StepDiagnostics* diag = nullptr) const;

  double dt() const { return dt_; }
  double nu() const { return nu_; }
  const SaddleSystem& system() const { return system_; }
  const Factorization& factorization() const { return fact_; }
  const Discretization& discretization() const { return *disc_; }

 private:
  std::shared_ptr<const Discretization> disc_;
  double nu_;
  double dt_;
  VectorFunction source_;
  CompositeMode mode_;
  SaddleSystem system_;
  Factorization fact_;
};

DirichletData boundary_data(const SimulationConfig& config, const Discretization& disc);

struct StationarityRates {
  double u = 0.0;
  double p = 0.0;
};

/// Max nodal |psi^n - psi^{n-1}| / dt over all velocity and pressure dofs.
StationarityRates stationarity_rate(const SimulationState& prev, const SimulationState& next, double dt);

struct StationarityReport {
  std::vector<double> rate_u;
  std::vector<double> rate_p;
  bool converged = false;
  long converged_step = -1;
};

struct TraceRow {
  long step = 0;
  double time = 0.0;
  double rate_u = 0.0;
  double rate_p = 0.0;
  double kinetic_energy = 0.0;
  int out_of_domain = 0;
};

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);

struct RunResult {
  SimulationState state;
  StationarityReport report;
  std::vector<TraceRow> trace;
  double dt = 0.0;  // final step size (differs from the config after halving)
  std::uint64_t initial_hash = 0;
  std::uint64_t final_hash = 0;
  std::string final_checkpoint;  // path, when written
};

/// Called after every step (and once for the initial state with step 0).
using StepObserver = std::function<void(const SimulationState&, const TraceRow&, const StepDiagnostics&)>;

class Simulation {
 public:
  explicit Simulation(SimulationConfig config, std::shared_ptr<const Discretization> disc = nullptr);

  const SimulationConfig& config() const { return config_; }
  const Discretization& discretization() const { return *disc_; }
  std::shared_ptr<const Discretization> shared_discretization() const { return disc_; }

  /// u^0 and p^0 from the configured initial-state source.
  SimulationState initial_state() const;
  /// Marches until both rates are below the tolerance, t >= t_max, or
  /// max_steps is reached. Non-convergence is reported, not thrown.
  RunResult run(const StepObserver& observer = {}) const;
  RunResult run_from(SimulationState initial, const StepObserver& observer = {}) const;

  Checkpoint to_checkpoint(const SimulationState& state, double dt) const;
  SimulationState from_checkpoint(const Checkpoint& cp) const;

 private:
  SimulationConfig config_;
  std::shared_ptr<const Discretization> disc_;
};

/// Runs each Re in turn, initializing every rung with the previous rung's
/// final state (the first rung uses the configured initial state). Each
/// final state is written as `<run_name>_re<Re>.chk` when output_dir is set.
std::vector<RunResult> continuation_ladder(const SimulationConfig& config, const std::vector<double>& re_list,
                                           bool stop_on_unconverged = false, const StepObserver& observer = {});

}  // namespace lgllv
