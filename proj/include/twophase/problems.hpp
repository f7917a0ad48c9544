#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twophase/fem.hpp"
#include "twophase/mesh.hpp"
#include "twophase/sparse.hpp"

namespace twophase {

/// Two-phase material data: densities f_- < f_+ and the volume fraction of
/// the f_+ phase.
struct ProblemParams {
  double f_minus = 1.0;
  double f_plus = 10.0;
  double delta = 0.2;

  /// Throws InvalidArgument unless 0 < f_- < f_+ and 0 < delta < 1.
  void validate() const;
  double contrast() const { return f_plus - f_minus; }
  double f_bar() const { return f_minus + delta * (f_plus - f_minus); }
  double target_volume(double domain_area) const { return delta * domain_area; }
};

/// One byte per cell, 1 where the cell belongs to the f_+ phase D.
using Indicator = std::vector<std::uint8_t>;

struct BangBangDensity {
  Indicator indicator;
  ProblemParams params;

  CellField values() const;
  double volume(const Mesh& mesh) const;
};

/// Admissible when |D| <= V and V - |D| < one (largest) cell area, which is
/// exactly what thresholding produces.
bool is_admissible(const BangBangDensity& f, const Mesh& mesh);

/// (f_+ - f_-) sqrt(|D_a symmetric-difference D_b|).
double l2_distance(const Indicator& a, const Indicator& b, const ProblemParams& params,
                   const Mesh& mesh);

enum class Sense { maximize, minimize };

/// True when `candidate` is strictly better than `current`.
bool improves(Sense sense, double candidate, double current);

struct Evaluation {
  double objective = 0.0;
  /// Ascent field: thresholding it at volume V improves the objective.
  /// Poisson: cell means of u. Eigenvalue: lambda times cell means of u^2.
  CellField gradient;
  ScalarField state;
  std::optional<double> eigenvalue;
  /// Solver self-check. Poisson: relative gap |b.u - u.Ku| / |b.u|.
  /// Eigenvalue: ||Ku - lambda M_f u|| / ||Ku||.
  double consistency = 0.0;
};

/// A two-phase objective on a fixed mesh. Operators that do not depend on
/// the density are assembled once at construction; evaluate() is const and
/// may be called concurrently.
class Problem {
 public:
  explicit Problem(const Mesh& mesh);
  virtual ~Problem() = default;

  virtual Sense sense() const = 0;
  virtual std::string name() const = 0;

  /// Evaluates an arbitrary positive cell density (relaxed densities are
  /// allowed). `guess` is an optional nodal state used to seed solvers.
  virtual Evaluation evaluate_field(std::span<const double> f,
                                    std::span<const double> guess = {}) const = 0;

  Evaluation evaluate(const BangBangDensity& f, std::span<const double> guess = {}) const;

  const Mesh& mesh() const { return mesh_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const DirichletSolver& solver() const { return solver_; }

 protected:
  const Mesh& mesh_;
  SparseMatrix stiffness_;
  DirichletSolver solver_;
};

/// Maximize J(f) = 1/2 int f u with -Laplace u = f, u = 0 on the boundary.
class PoissonProblem final : public Problem {
 public:
  using Problem::Problem;
  Sense sense() const override { return Sense::maximize; }
  std::string name() const override { return "poisson"; }
  Evaluation evaluate_field(std::span<const double> f,
                            std::span<const double> guess = {}) const override;
};

/// Minimize the principal eigenvalue of -Laplace u = lambda f u.
class EigenProblem final : public Problem {
 public:
  using Problem::Problem;
  Sense sense() const override { return Sense::minimize; }
  std::string name() const override { return "eigen"; }
  Evaluation evaluate_field(std::span<const double> f,
                            std::span<const double> guess = {}) const override;
};

Evaluation poisson_evaluate(const Mesh& mesh, const BangBangDensity& f);
Evaluation eigen_evaluate(const Mesh& mesh, const BangBangDensity& f);

/// <g, f_best - f> in L2, where f_best thresholds g at the target volume.
/// Nonnegative; zero exactly at fixed points of the threshold map.
double stationarity_residual(std::span<const double> g, const BangBangDensity& f,
                             const Mesh& mesh);

}  // namespace twophase
