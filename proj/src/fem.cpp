#include "twophase/fem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

void check_cell_field(std::span<const double> f, const Mesh& mesh) {
  if (f.size() != mesh.num_cells()) {
    throw InvalidArgument("cell field has " + std::to_string(f.size()) +
                          " entries, mesh has " + std::to_string(mesh.num_cells()) +
                          " cells");
  }
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh) {
  const auto& verts = mesh.vertices();
  const auto& tris = mesh.triangles();
  const double min_area = 1e-14 * mesh.total_area();
  std::vector<Triplet> entries;
  entries.reserve(9 * tris.size());

  for (std::size_t c = 0; c < tris.size(); ++c) {
    const auto& t = tris[c];
    const double area = mesh.cell_area()[c];
    if (area < min_area) {
      throw SolverError("assemble_stiffness: cell " + std::to_string(c) + " is degenerate");
    }
    // Edge opposite vertex a, as a vector; grad phi_a = rot90(edge) / (2|T|).
    std::array<Point, 3> edge;
    for (int a = 0; a < 3; ++a) {
      const auto& p = verts[t[(a + 1) % 3]];
      const auto& q = verts[t[(a + 2) % 3]];
      edge[a] = {q[0] - p[0], q[1] - p[1]};
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double value =
            (edge[a][0] * edge[b][0] + edge[a][1] * edge[b][1]) / (4.0 * area);
        entries.push_back({t[a], t[b], value});
      }
    }
  }
  return SparseMatrix(static_cast<int>(mesh.num_vertices()), std::move(entries));
}

std::vector<double> assemble_load(const Mesh& mesh, std::span<const double> f) {
  check_cell_field(f, mesh);
  std::vector<double> b(mesh.num_vertices(), 0.0);
  const auto& tris = mesh.triangles();
  for (std::size_t c = 0; c < tris.size(); ++c) {
    const double share = f[c] * mesh.cell_area()[c] / 3.0;
    for (int v : tris[c]) b[v] += share;
  }
  return b;
}

SparseMatrix assemble_weighted_mass(const Mesh& mesh, std::span<const double> f) {
  check_cell_field(f, mesh);
  const auto& tris = mesh.triangles();
  std::vector<Triplet> entries;
  entries.reserve(9 * tris.size());
  for (std::size_t c = 0; c < tris.size(); ++c) {
    if (!(f[c] > 0.0)) {
      throw InvalidArgument("assemble_weighted_mass: weight on cell " + std::to_string(c) +
                            " is not positive");
    }
    const double scale = f[c] * mesh.cell_area()[c] / 12.0;
    const auto& t = tris[c];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) entries.push_back({t[a], t[b], (a == b ? 2.0 : 1.0) * scale});
    }
  }
  return SparseMatrix(static_cast<int>(mesh.num_vertices()), std::move(entries));
}

DirichletSolver::DirichletSolver(const SparseMatrix& stiffness, const Mesh& mesh)
    : num_vertices_(mesh.num_vertices()) {
  if (stiffness.dimension() != static_cast<int>(num_vertices_)) {
    throw InvalidArgument("stiffness matrix dimension does not match mesh");
  }
  for (std::size_t v = 0; v < num_vertices_; ++v) {
    if (!mesh.is_boundary(v)) interior_.push_back(static_cast<int>(v));
  }
  if (interior_.empty()) throw InvalidArgument("mesh has no interior vertices");
  k_inner_ = stiffness.restrict_to(interior_);
}

std::vector<double> DirichletSolver::gather(std::span<const double> full) const {
  std::vector<double> inner(interior_.size());
  for (std::size_t k = 0; k < interior_.size(); ++k) inner[k] = full[interior_[k]];
  return inner;
}

ScalarField DirichletSolver::scatter(std::span<const double> inner) const {
  ScalarField full(num_vertices_, 0.0);
  for (std::size_t k = 0; k < interior_.size(); ++k) full[interior_[k]] = inner[k];
  return full;
}

ScalarField DirichletSolver::solve(std::span<const double> b,
                                   std::span<const double> guess) const {
  if (b.size() != num_vertices_) throw InvalidArgument("load vector length mismatch");
  const auto rhs = gather(b);
  std::vector<double> x =
      guess.size() == num_vertices_ ? gather(guess) : std::vector<double>(rhs.size(), 0.0);
  const int n = k_inner_.dimension();
  solve_pcg(k_inner_, rhs, x, kCgTolerance, 10 * n);
  return scatter(x);
}

EigenResult DirichletSolver::principal_eig(const SparseMatrix& mass,
                                           std::span<const double> guess) const {
  if (mass.dimension() != static_cast<int>(num_vertices_)) {
    throw InvalidArgument("mass matrix dimension does not match mesh");
  }
  const SparseMatrix m_inner = mass.restrict_to(interior_);
  const int n = k_inner_.dimension();

  std::vector<double> u =
      guess.size() == num_vertices_ ? gather(guess) : std::vector<double>(n, 1.0);
  if (norm2(u) == 0.0) std::fill(u.begin(), u.end(), 1.0);

  std::vector<double> mu(n), ku(n), w(n);
  auto normalize = [&](std::vector<double>& v) {
    m_inner.multiply(v, mu);
    const double scale = 1.0 / std::sqrt(dot(v, mu));
    for (double& x : v) x *= scale;
    for (double& x : mu) x *= scale;
  };
  normalize(u);
  k_inner_.multiply(u, ku);
  double lambda = dot(u, ku);

  auto residual = [&](double lam) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += (ku[i] - lam * mu[i]) * (ku[i] - lam * mu[i]);
    return std::sqrt(r2) / norm2(ku);
  };

  for (int it = 1; it <= kEigenMaxIterations; ++it) {
    for (int i = 0; i < n; ++i) w[i] = u[i] / lambda;
    solve_pcg(k_inner_, mu, w, kCgTolerance, 10 * n);
    u.swap(w);
    normalize(u);
    k_inner_.multiply(u, ku);
    const double next = dot(u, ku);
    const double change = std::abs(next - lambda) / next;
    lambda = next;
    const double res = residual(lambda);
    if (change < kEigenValueTolerance && res < kEigenResidualTolerance) {
      const auto peak = std::max_element(u.begin(), u.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      });
      if (*peak < 0.0) {
        for (double& x : u) x = -x;
      }
      return {lambda, scatter(u), it, res};
    }
  }
  std::ostringstream msg;
  msg << "inverse power iteration did not converge in " << kEigenMaxIterations
      << " iterations (lambda " << lambda << ", residual " << residual(lambda) << ")";
  throw SolverError(msg.str());
}

ScalarField solve_dirichlet(const SparseMatrix& stiffness, std::span<const double> b,
                            const Mesh& mesh) {
  return DirichletSolver(stiffness, mesh).solve(b);
}

EigenResult principal_eig(const SparseMatrix& stiffness, const SparseMatrix& mass,
                          const Mesh& mesh) {
  return DirichletSolver(stiffness, mesh).principal_eig(mass);
}

}  // namespace twophase
