#include "lgllv/solver/solver.hpp"

#include <cmath>
#include <random>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

namespace lgllv {

namespace {

/// Jacobi on the velocity block and a supplied diagonal on the pressure block.
class BlockDiagonalPreconditioner {
 public:
  using Scalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  BlockDiagonalPreconditioner() = default;

  void set_blocks(const SaddleBlocks* blocks) { blocks_ = blocks; }

  template <typename MatType>
  BlockDiagonalPreconditioner& analyzePattern(const MatType&) {
    return *this;
  }
  template <typename MatType>
  BlockDiagonalPreconditioner& factorize(const MatType& mat) {
    inverse_ = Vector::Ones(mat.cols());
    for (Eigen::Index col = 0; col < mat.outerSize(); ++col)
      for (typename MatType::InnerIterator it(mat, col); it; ++it)
        if (it.row() == col && it.value() != 0.0) inverse_[col] = 1.0 / std::abs(it.value());
    if (blocks_) {
      for (Eigen::Index i = 0; i < blocks_->pressure_diagonal.size(); ++i)
        inverse_[blocks_->num_velocity + i] = blocks_->pressure_diagonal[i];
    }
    return *this;
  }
  template <typename MatType>
  BlockDiagonalPreconditioner& compute(const MatType& mat) {
    return factorize(mat);
  }
  template <typename Rhs>
  Vector solve(const Rhs& b) const {
    return inverse_.cwiseProduct(b);
  }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

 private:
  const SaddleBlocks* blocks_ = nullptr;
  Vector inverse_;
};

double norm1(const SparseMatrix& a) {
  double best = 0.0;
  for (int col = 0; col < a.outerSize(); ++col) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

struct Factorization::Backend {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  Eigen::MINRES<SparseMatrix, Eigen::Lower | Eigen::Upper, BlockDiagonalPreconditioner> minres;
  SaddleBlocks blocks;
};

Factorization Factorization::compute(const SparseMatrix& matrix, SolverKind kind, const SaddleBlocks* blocks) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("factorize needs a square matrix");
  Factorization f;
  f.kind_ = kind;
  f.matrix_ = std::make_shared<const SparseMatrix>(matrix);
  f.backend_ = std::make_shared<Backend>();
  f.stats_.dimension = matrix.rows();
  f.stats_.nonzeros = matrix.nonZeros();

  const SparseMatrix& a = *f.matrix_;
  if (kind == SolverKind::Direct) {
    auto& lu = f.backend_->lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) {
      // SparseLU reports the failing column in its message.
      throw SingularMatrixError("sparse LU failed: " + lu.lastErrorMessage(), -1);
    }
    f.stats_.factor_nonzeros = lu.nnzL() + lu.nnzU();
  } else {
    if (blocks) f.backend_->blocks = *blocks;
    auto& solver = f.backend_->minres;
    solver.preconditioner().set_blocks(blocks ? &f.backend_->blocks : nullptr);
    solver.setTolerance(1e-13);
    solver.setMaxIterations(std::max<long>(1000, 20 * a.rows()));
    solver.compute(a);
  }

  // Inverse power iteration: a (near-)singular matrix amplifies a generic
  // vector by roughly 1/eps.
  if (kind == SolverKind::Direct) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector x(a.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = dist(rng);
    x.normalize();
    double growth = 0.0;
    for (int it = 0; it < 4; ++it) {
      Vector y = f.raw_solve(x);
      const double ny = y.norm();
      if (!std::isfinite(ny)) throw SingularMatrixError("numerically singular matrix (non-finite solve)", -1);
      growth = ny;
      x = y / ny;
    }
    f.stats_.condition_estimate = norm1(a) * growth;
    if (f.stats_.condition_estimate > 1e13) {
      Eigen::Index pivot = 0;
      x.cwiseAbs().maxCoeff(&pivot);
      throw SingularMatrixError("numerically singular matrix (condition estimate " +
                                    std::to_string(f.stats_.condition_estimate) + ", near-null direction peaks at " +
                                    std::to_string(pivot) + ")",
                                static_cast<long>(pivot));
    }
  }
  return f;
}

Vector Factorization::raw_solve(const Vector& b) const {
  if (kind_ == SolverKind::Direct) return backend_->lu.solve(b);
  return backend_->minres.solve(b);
}

double Factorization::relative_residual(const Vector& x, const Vector& b) const {
  const double nb = b.norm();
  const double nr = (*matrix_ * x - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

Vector Factorization::solve(const Vector& b) const {
  if (b.size() != matrix_->rows()) throw std::invalid_argument("right-hand side has the wrong dimension");
  Vector x = raw_solve(b);
  for (int refine = 0; refine < 2 && relative_residual(x, b) > 1e-12; ++refine) {
    const Vector r = b - *matrix_ * x;
    x += raw_solve(r);
  }
  return x;
}

Factorization factorize(const SaddleSystem& system, SolverKind kind) {
  if (kind == SolverKind::Direct) return Factorization::compute(system.matrix, kind);
  SaddleBlocks blocks;
  blocks.num_velocity = system.num_velocity;
  // Inverse lumped-mass-like scaling from the constraint border when present.
  blocks.pressure_diagonal = Vector::Ones(system.num_pressure);
  if (system.mean_constraint) {
    const int l = system.size() - 1;
    for (SparseMatrix::InnerIterator it(system.matrix, l); it; ++it)
      if (it.row() >= system.num_velocity && it.row() < l && it.value() != 0.0)
        blocks.pressure_diagonal[it.row() - system.num_velocity] = 1.0 / it.value();
  }
  return Factorization::compute(system.matrix, kind, &blocks);
}

StepSolution solve_step(const Factorization& fact, const SaddleSystem& system, const Vector& rhs,
                        const VelocityDofMap& vdofs, const PressureDofMap& pdofs) {
  const Vector x = fact.solve(rhs);
  StepSolution out{VelocityField(vdofs), PressureField(pdofs)};
  std::copy(x.data(), x.data() + system.num_velocity, out.u.values().begin());
  std::copy(x.data() + system.num_velocity, x.data() + system.num_velocity + system.num_pressure,
            out.p.values().begin());
  if (system.mean_constraint) out.multiplier = x[system.size() - 1];
  out.residual = fact.relative_residual(x, rhs);
  return out;
}

std::pair<VelocityField, PressureField> stokes_projection(const VelocityField& u0, const PressureDofMap& pdofs,
                                                          const DirichletData& bc, double nu, SolverKind kind) {
  const VelocityDofMap& vdofs = u0.dof_map();
  const SparseMatrix a = assemble_stiffness(vdofs, nu);
  const SparseMatrix b = assemble_divergence(vdofs, pdofs);
  const Vector c = mean_pressure_constraint(pdofs);
  SaddleSystem system = build_saddle_system(a, b, &c);
  apply_dirichlet(system, bc);

  const Eigen::Map<const Vector> u0v(u0.values().data(), vdofs.num_dofs());
  const Vector rhs = system.rhs(a * u0v, b * u0v);
  const Factorization fact = factorize(system, kind);
  StepSolution s = solve_step(fact, system, rhs, vdofs, pdofs);
  return {std::move(s.u), std::move(s.p)};
}

std::pair<VelocityField, PressureField> stokes_projection(const VelocityDofMap& vdofs, const PressureDofMap& pdofs,
                                                          const std::function<Point(const Point&)>& u0, double nu,
                                                          SolverKind kind) {
  return stokes_projection(interpolate_velocity(vdofs, u0), pdofs, dirichlet_from_function(vdofs, u0), nu, kind);
}

}  // namespace lgllv
