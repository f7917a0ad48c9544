#pragma once

#include <span>
#include <vector>

#include "twophase/mesh.hpp"
#include "twophase/sparse.hpp"

namespace twophase {

/// Relative residual at which every Dirichlet solve stops.
inline constexpr double kCgTolerance = 1e-10;
/// Relative change of the eigenvalue between inverse-iteration steps.
inline constexpr double kEigenValueTolerance = 1e-12;
/// ||Ku - lambda M u|| / ||Ku|| required at return.
inline constexpr double kEigenResidualTolerance = 1e-9;
inline constexpr int kEigenMaxIterations = 10000;

struct EigenResult {
  double lambda = 0.0;
  ScalarField u;  ///< normalized so that u^T M_f u = 1, zero on the boundary
  int iterations = 0;
  double residual = 0.0;  ///< ||Ku - lambda M_f u|| / ||Ku|| on interior rows
};

/// P1 stiffness matrix over all vertices (boundary rows included).
/// Throws SolverError on cells with area below 1e-14 |Omega|.
SparseMatrix assemble_stiffness(const Mesh& mesh);

/// b_i = sum over cells T containing i of f_T |T| / 3.
std::vector<double> assemble_load(const Mesh& mesh, std::span<const double> f);

/// M_f = sum_T f_T |T|/12 [[2,1,1],[1,2,1],[1,1,2]]. f must be positive.
SparseMatrix assemble_weighted_mass(const Mesh& mesh, std::span<const double> f);

/// Homogeneous Dirichlet problems on a fixed stiffness matrix. The interior
/// restriction of K is built once and shared by every solve.
class DirichletSolver {
 public:
  DirichletSolver(const SparseMatrix& stiffness, const Mesh& mesh);

  /// Solves K u = b on interior vertices, u = 0 on the boundary. A nodal
  /// guess (full length) seeds the conjugate-gradient iteration.
  ScalarField solve(std::span<const double> b, std::span<const double> guess = {}) const;

  /// Smallest eigenpair of K u = lambda M u by inverse power iteration.
  EigenResult principal_eig(const SparseMatrix& mass,
                            std::span<const double> guess = {}) const;

  std::span<const int> interior() const { return interior_; }
  const SparseMatrix& interior_stiffness() const { return k_inner_; }

 private:
  std::vector<double> gather(std::span<const double> full) const;
  ScalarField scatter(std::span<const double> inner) const;

  std::size_t num_vertices_;
  std::vector<int> interior_;
  SparseMatrix k_inner_;
};

ScalarField solve_dirichlet(const SparseMatrix& stiffness, std::span<const double> b,
                            const Mesh& mesh);

EigenResult principal_eig(const SparseMatrix& stiffness, const SparseMatrix& mass,
                          const Mesh& mesh);

}  // namespace twophase
