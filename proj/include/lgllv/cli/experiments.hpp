#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lgllv/cli/manufactured.hpp"
#include "lgllv/postprocess/postprocess.hpp"
#include "lgllv/timeloop/timeloop.hpp"

namespace lgllv {

using LogFunction = std::function<void(const std::string&)>;

// ---------------------------------------------------------------------------
// Convergence study

struct ConvergenceLevel {
  int n = 0;
  double h = 0.0;  // 1/n
  double dt = 0.0;
  long steps = 0;
  double velocity_error = 0.0;  // l-infinity(H1) of u_h - I_h u
  double pressure_error = 0.0;  // l2(L2) of p_h - I_h p
  double seconds = 0.0;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;  // log(y) - fit, per point
};

/// Least-squares line through (log x, log y). Throws std::invalid_argument
/// for fewer than 3 points or non-positive data.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Runs the scheme for N = floor(t_final/dt) steps from the Stokes
/// projection of u(0) and measures the errors against the nodal
/// interpolants of the exact solution.
ConvergenceLevel run_manufactured(const ManufacturedSolution& ms, int n, double dt, double t_final,
                                  const CompositeMode& mode = {});

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  LogLogFit velocity_fit;  // against h
  LogLogFit pressure_fit;  // against h
};

ConvergenceReport convergence_study(const ManufacturedSolution& ms, const std::vector<int>& ns,
                                    const std::function<double(double h)>& dt_rule, double t_final,
                                    const LogFunction& log = {});

/// Fixed mesh, a sequence of step sizes.
std::vector<ConvergenceLevel> time_step_study(const ManufacturedSolution& ms, int n, const std::vector<double>& dts,
                                              double t_final, const LogFunction& log = {});

// ---------------------------------------------------------------------------
// Cavity experiments

enum class Example1Stage { Star, Hysteresis, Ladder };
Example1Stage parse_stage(const std::string& s);

struct ExampleOptions {
  int n = 32;
  double dt = 1.0 / 64.0;
  double hysteresis_dt = 1.0 / 256.0;
  double t_max = 400.0;
  double tolerance = 1e-4;
  double lid_ramp = 1.0 / 16.0;
  std::string output_dir = "lgllv_out";
  std::vector<double> star_re{500.0, 1000.0, 2000.0, 4000.0};
  double hysteresis_from_re = 1000.0;
  double hysteresis_re = 2000.0;
  std::vector<double> ladder_re{1500.0, 1550.0, 1600.0, 1650.0, 1700.0, 1750.0};
  std::vector<double> example2_re{200.0, 400.0};
  double iso_base = 1.0;
  double iso_height = 2.0;
  /// Reuse `<name>_final.chk` files that are stationary and match the config.
  bool reuse_checkpoints = true;
  long progress_every = 0;
  LogFunction log;
};

struct RunSummary {
  std::string name;
  double re = 0.0;
  double dt = 0.0;
  bool converged = false;
  bool reused = false;
  long steps = 0;
  double time = 0.0;
  std::string checkpoint;
  std::string svg;
  std::optional<StagnationResult> stagnation;
};

struct ExperimentOutcome {
  std::vector<RunSummary> runs;
  bool all_converged = true;
  std::vector<StagnationResult> stagnation;  // also written as CSV
  /// Hysteresis stage: relative L2 distances ||a - b|| / ||b|| of u**(Re)
  /// to u*(Re_from) and to u*(Re), and of the coarse-dt continuation to u*(Re).
  double distance_to_from = std::numeric_limits<double>::quiet_NaN();
  double distance_to_star = std::numeric_limits<double>::quiet_NaN();
  double coarse_distance_to_star = std::numeric_limits<double>::quiet_NaN();
};

ExperimentOutcome run_example1(Example1Stage stage, const ExampleOptions& options);
ExperimentOutcome run_example2(const ExampleOptions& options);

/// ||a - b||_L2 / ||b||_L2.
double relative_l2_distance(const VelocityField& a, const VelocityField& b);

// ---------------------------------------------------------------------------
// Quadrature-mode comparison (reported, never asserted)

struct ModeTrace {
  std::string label;
  std::vector<double> max_velocity;  // max nodal |u| per step
  std::vector<double> divergence;    // max_i |b(u, psi_i)| per step
  bool blew_up = false;
  std::string error;
};

struct QuadratureComparison {
  ModeTrace baseline;
  std::vector<ModeTrace> variants;
  /// max over steps of |max_velocity - baseline max_velocity|, per variant.
  std::vector<double> max_deviation;
};

/// `config.max_steps` bounds every run. A variant blows up when its nodal
/// maximum exceeds 10x the baseline maximum, becomes non-finite, or the step
/// fails.
QuadratureComparison compare_quadrature(SimulationConfig config, const std::vector<int>& orders,
                                        const LogFunction& log = {});

}  // namespace lgllv
