#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>

#include "lgllv/assembly/assembly.hpp"

namespace lgllv {

enum class SolverKind { Direct, Minres };

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, long pivot) : std::runtime_error(what), pivot_(pivot) {}
  /// Row/column index where singularity was detected.
  long pivot() const { return pivot_; }

 private:
  long pivot_;
};

struct FactorizationStats {
  long dimension = 0;
  long nonzeros = 0;
  long factor_nonzeros = 0;
  /// Always 0: the backends never perturb pivots.
  int pivot_perturbations = 0;
  /// Estimate of ||A||_1 ||A^{-1}|| from inverse power iteration.
  double condition_estimate = 0.0;
};

/// Hints for the block-diagonal preconditioner of the iterative backend.
struct SaddleBlocks {
  int num_velocity = 0;
  Vector pressure_diagonal;  // approximate inverse-Schur diagonal per pressure dof
};

/// A reusable factorization of a fixed matrix. Solves are const and do not
/// mutate state; the time loop calls them sequentially.
class Factorization {
 public:
  /// Throws SingularMatrixError for structurally or numerically singular input.
  static Factorization compute(const SparseMatrix& matrix, SolverKind kind = SolverKind::Direct,
                               const SaddleBlocks* blocks = nullptr);

  /// Solves A x = b; one step of iterative refinement is applied when the
  /// relative residual exceeds 1e-12.
  Vector solve(const Vector& b) const;
  double relative_residual(const Vector& x, const Vector& b) const;

  const FactorizationStats& stats() const { return stats_; }
  SolverKind kind() const { return kind_; }
  const SparseMatrix& matrix() const { return *matrix_; }

 private:
  struct Backend;

  Factorization() = default;
  Vector raw_solve(const Vector& b) const;

  SolverKind kind_ = SolverKind::Direct;
  std::shared_ptr<const SparseMatrix> matrix_;
  std::shared_ptr<Backend> backend_;
  FactorizationStats stats_;
};

/// Factorizes an assembled, constrained saddle system.
Factorization factorize(const SaddleSystem& system, SolverKind kind = SolverKind::Direct);

struct StepSolution {
  VelocityField u;
  PressureField p;
  double multiplier = 0.0;
  double residual = 0.0;  // relative residual of the accepted solve
};

StepSolution solve_step(const Factorization& fact, const SaddleSystem& system, const Vector& rhs,
                        const VelocityDofMap& vdofs, const PressureDofMap& pdofs);

/// Stokes projection of (u0, 0): solves a(u - u0, v) + b(v, p) = 0,
/// b(u - u0, q) = 0 with u = u0 on the boundary, using the P2 interpolant of
/// u0. Returns the velocity and pressure components.
std::pair<VelocityField, PressureField> stokes_projection(const VelocityDofMap& vdofs, const PressureDofMap& pdofs,
                                                          const std::function<Point(const Point&)>& u0,
                                                          double nu = 1.0, SolverKind kind = SolverKind::Direct);
/// Same with a discrete u0 and explicit boundary data. With u0 = 0 this is
/// the stationary Stokes flow driven by `bc`.
std::pair<VelocityField, PressureField> stokes_projection(const VelocityField& u0, const PressureDofMap& pdofs,
                                                          const DirichletData& bc, double nu = 1.0,
                                                          SolverKind kind = SolverKind::Direct);

}  // namespace lgllv
