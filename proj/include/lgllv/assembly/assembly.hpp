#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "lgllv/spaces/fields.hpp"
#include "lgllv/transport/characteristics.hpp"

namespace lgllv {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
/// f(x, t)
using VectorFunction = std::function<Point(const Point&, double)>;

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// nu (grad u, grad v) on the P2 vector space.
SparseMatrix assemble_stiffness(const VelocityDofMap& dofs, double nu);
/// (u, v) on the P2 vector space.
SparseMatrix assemble_velocity_mass(const VelocityDofMap& dofs);
/// Rows: P1 pressure dofs; columns: velocity dofs. Entry (q, v) = -(div v, q).
SparseMatrix assemble_divergence(const VelocityDofMap& vdofs, const PressureDofMap& pdofs);
/// c_i = integral of the P1 basis function psi_i.
Vector mean_pressure_constraint(const PressureDofMap& pdofs);

/// Scalar P2 mass and stiffness matrices (stream-function post-processing).
SparseMatrix assemble_p2_scalar_mass(const VelocityDofMap& dofs);
SparseMatrix assemble_p2_scalar_stiffness(const VelocityDofMap& dofs);

/// Regularized lid speed: g(s) = q(s / (ramp * L)) near each lid end with
/// q(t) = 3t^2 - 2t^3, and g = 1 on the central part.
struct LidProfile {
  double ramp = 1.0 / 16.0;  // fraction of the lid length

  double operator()(double s, double length) const;
};

/// Prescribed velocity dofs, sorted ascending.
struct DirichletData {
  std::vector<int> dofs;
  std::vector<double> values;
};

/// Lid nodes get (g(s), 0) with s the arclength along their lid chain; wall
/// nodes get 0. Throws ConfigurationError on unlabeled boundary nodes.
DirichletData lid_driven_dirichlet(const VelocityDofMap& dofs, const LidProfile& profile);
/// Every boundary node gets f(node).
DirichletData dirichlet_from_function(const VelocityDofMap& dofs, const std::function<Point(const Point&)>& f);

/// Bordered symmetric saddle-point system
///
///     [ K   B^T  0 ] [u]   [F]
///     [ B   0    c ] [p] = [0]
///     [ 0   c^T  0 ] [l]   [0]
///
/// with Dirichlet velocity dofs eliminated symmetrically (their rows and
/// columns replaced by identity, constrained columns moved to `lift`).
struct SaddleSystem {
  SparseMatrix matrix;
  Vector lift;
  DirichletData dirichlet;
  int num_velocity = 0;
  int num_pressure = 0;
  bool mean_constraint = true;

  int size() const { return static_cast<int>(matrix.rows()); }
  /// Full right-hand side from a velocity load vector.
  Vector rhs(const Vector& velocity_load) const;
  /// Right-hand side with an additional continuity load (b(u0, q) terms).
  Vector rhs(const Vector& velocity_load, const Vector& continuity_load) const;
};

SaddleSystem build_saddle_system(const SparseMatrix& velocity_block, const SparseMatrix& divergence,
                                 const Vector* constraint);
/// Eliminates the Dirichlet dofs symmetrically. May be called once.
void apply_dirichlet(SaddleSystem& system, const DirichletData& data);

struct CompositeMode {
  bool exact = true;
  int quadrature_degree = 4;  // used when !exact
};

struct RhsStats {
  int out_of_domain_elements = 0;
  double max_deficit = 0.0;
  int projected_points = 0;
};

/// Velocity load (1/dt)(u_prev o X_1(Pi_1 u_prev), v) + (f(t), v).
/// Throws NonInjectiveMap naming the lowest offending element.
Vector assemble_rhs(const CompositeIntegrator& integrator, const VelocityField& u_prev, double dt,
                    const VectorFunction* source, double time, const CompositeMode& mode = {},
                    RhsStats* stats = nullptr);

/// (f(t), v) with a degree-10 rule.
Vector assemble_source(const VelocityDofMap& dofs, const VectorFunction& f, double time);

/// max |A - A^T| / max |A|.
double symmetry_defect(const SparseMatrix& a);

}  // namespace lgllv
