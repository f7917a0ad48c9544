#include "twophase/problems.hpp"

#include <cmath>

#include "twophase/errors.hpp"
#include "twophase/rearrange.hpp"

namespace twophase {

void ProblemParams::validate() const {
  if (!(f_minus > 0.0) || !(f_plus > f_minus)) {
    throw InvalidArgument("densities must satisfy 0 < f_minus < f_plus");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidArgument("volume fraction delta must lie in (0,1)");
  }
}

CellField BangBangDensity::values() const {
  CellField f(indicator.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    f[c] = indicator[c] ? params.f_plus : params.f_minus;
  }
  return f;
}

double BangBangDensity::volume(const Mesh& mesh) const {
  double v = 0.0;
  for (std::size_t c = 0; c < indicator.size(); ++c) {
    if (indicator[c]) v += mesh.cell_area()[c];
  }
  return v;
}

bool is_admissible(const BangBangDensity& f, const Mesh& mesh) {
  if (f.indicator.size() != mesh.num_cells()) return false;
  const double target = f.params.target_volume(mesh.total_area());
  const double vol = f.volume(mesh);
  const double slack = 1e-12 * mesh.total_area();
  return vol <= target + slack && target - vol < mesh.max_cell_area() + slack;
}

double l2_distance(const Indicator& a, const Indicator& b, const ProblemParams& params,
                   const Mesh& mesh) {
  double sym_diff = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c] != b[c]) sym_diff += mesh.cell_area()[c];
  }
  return params.contrast() * std::sqrt(sym_diff);
}

bool improves(Sense sense, double candidate, double current) {
  return sense == Sense::maximize ? candidate > current : candidate < current;
}

Problem::Problem(const Mesh& mesh)
    : mesh_(mesh), stiffness_(assemble_stiffness(mesh)), solver_(stiffness_, mesh) {}

Evaluation Problem::evaluate(const BangBangDensity& f, std::span<const double> guess) const {
  if (f.indicator.size() != mesh_.num_cells()) {
    throw InvalidArgument("density indicator length does not match mesh");
  }
  return evaluate_field(f.values(), guess);
}

Evaluation PoissonProblem::evaluate_field(std::span<const double> f,
                                          std::span<const double> guess) const {
  const auto b = assemble_load(mesh_, f);
  Evaluation e;
  e.state = solver_.solve(b, guess);
  const double work = dot(b, e.state);
  const double energy = dot(e.state, stiffness_ * e.state);
  e.objective = 0.5 * work;
  e.consistency = work == 0.0 ? 0.0 : std::abs(work - energy) / std::abs(work);
  e.gradient = cell_average(e.state, mesh_);
  return e;
}

Evaluation EigenProblem::evaluate_field(std::span<const double> f,
                                        std::span<const double> guess) const {
  const auto mass = assemble_weighted_mass(mesh_, f);
  auto eig = solver_.principal_eig(mass, guess);
  Evaluation e;
  e.objective = eig.lambda;
  e.eigenvalue = eig.lambda;
  e.consistency = eig.residual;
  e.gradient = cell_average_square(eig.u, mesh_);
  for (double& g : e.gradient) g *= eig.lambda;
  e.state = std::move(eig.u);
  return e;
}

Evaluation poisson_evaluate(const Mesh& mesh, const BangBangDensity& f) {
  return PoissonProblem(mesh).evaluate(f);
}

Evaluation eigen_evaluate(const Mesh& mesh, const BangBangDensity& f) {
  return EigenProblem(mesh).evaluate(f);
}

double stationarity_residual(std::span<const double> g, const BangBangDensity& f,
                             const Mesh& mesh) {
  if (g.size() != mesh.num_cells() || f.indicator.size() != mesh.num_cells()) {
    throw InvalidArgument("stationarity_residual: field length does not match mesh");
  }
  const auto best = bathtub_threshold(g, mesh, f.params.target_volume(mesh.total_area()));
  double gap = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const int d = static_cast<int>(best[c]) - static_cast<int>(f.indicator[c]);
    if (d != 0) gap += d * g[c] * mesh.cell_area()[c];
  }
  return f.params.contrast() * gap;
}

}  // namespace twophase
