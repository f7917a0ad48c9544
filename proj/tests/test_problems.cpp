#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "twophase/cli.hpp"
#include "twophase/errors.hpp"
#include "twophase/problems.hpp"
#include "twophase/rearrange.hpp"

using namespace twophase;

namespace {

const ProblemParams kParams{1.0, 10.0, 0.2};

BangBangDensity random_density(const Mesh& m, const ProblemParams& p, std::uint64_t seed) {
  return {cli::random_indicator(m, p, seed), p};
}

// Reflects the mesh across x = lx/2; triangle order and vertex order kept
// (the constructor reorients the mirrored triangles).
Mesh mirror_x(const Mesh& m, double lx) {
  auto verts = m.vertices();
  for (auto& p : verts) p[0] = lx - p[0];
  return Mesh(verts, m.triangles());
}

double l2_pairing(std::span<const double> g, std::span<const double> df, const Mesh& m) {
  double s = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) s += g[c] * df[c] * m.cell_area()[c];
  return s;
}

}  // namespace

TEST(ProblemParams, DerivedQuantities) {
  EXPECT_DOUBLE_EQ(kParams.f_bar(), 2.8);
  EXPECT_DOUBLE_EQ(kParams.target_volume(2.0), 0.4);
  EXPECT_NO_THROW(kParams.validate());
  EXPECT_THROW((ProblemParams{0.0, 1.0, 0.5}.validate()), InvalidArgument);
  EXPECT_THROW((ProblemParams{2.0, 1.0, 0.5}.validate()), InvalidArgument);
  EXPECT_THROW((ProblemParams{1.0, 2.0, 1.0}.validate()), InvalidArgument);
}

TEST(Admissibility, VolumeWithinOneCell) {
  const Mesh m = build_rect_mesh(10, 5, 2.0, 1.0);  // 100 cells of area 0.02
  BangBangDensity f{cli::default_indicator(m, kParams), kParams};
  EXPECT_TRUE(is_admissible(f, m));
  EXPECT_NEAR(f.volume(m), 0.4, 1e-12);
  f.indicator[99] = 1;
  EXPECT_FALSE(is_admissible(f, m));
  f.indicator[99] = 0;
  f.indicator[0] = 0;
  EXPECT_TRUE(is_admissible(f, m));  // short by exactly one cell area
  f.indicator[1] = 0;
  EXPECT_FALSE(is_admissible(f, m));
}

TEST(PoissonEvaluate, EnergyIdentity) {
  const Mesh m = build_rect_mesh(32, 16, 2.0, 1.0);
  const PoissonProblem problem(m);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = random_density(m, kParams, seed);
    const auto e = problem.evaluate(f);
    const double energy = 0.5 * dot(e.state, problem.stiffness() * e.state);
    EXPECT_NEAR(e.objective, energy, 1e-10 * e.objective);
    EXPECT_LT(e.consistency, 1e-10);
    EXPECT_EQ(e.gradient.size(), m.num_cells());
    EXPECT_FALSE(e.eigenvalue.has_value());
  }
}

TEST(PoissonEvaluate, MirrorSymmetry) {
  const Mesh m = build_rect_mesh(24, 12, 2.0, 1.0);
  const Mesh mirrored = mirror_x(m, 2.0);
  const auto f = random_density(m, kParams, 17);
  const double a = poisson_evaluate(m, f).objective;
  const double b = poisson_evaluate(mirrored, f).objective;
  EXPECT_NEAR(a, b, 1e-9);

  // Point reflection maps the structured mesh onto itself: cell c -> N-1-c.
  BangBangDensity rotated = f;
  std::reverse(rotated.indicator.begin(), rotated.indicator.end());
  EXPECT_NEAR(poisson_evaluate(m, rotated).objective, a, 1e-9);
}

TEST(PoissonEvaluate, MonotoneInDensity) {
  const Mesh m = build_rect_mesh(4, 3, 1.0, 1.0);
  const PoissonProblem problem(m);
  const auto f = random_density(m, kParams, 5).values();
  const double base = problem.evaluate_field(f).objective;
  for (std::size_t c = 0; c < f.size(); ++c) {
    auto g = f;
    g[c] += 2.0;
    EXPECT_GE(problem.evaluate_field(g).objective, base);
  }
}

TEST(PoissonEvaluate, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(12);
  const Mesh m = build_rect_mesh(12, 6, 2.0, 1.0);
  const PoissonProblem problem(m);
  std::uniform_real_distribution<double> mid(3.0, 8.0), dir(-1.0, 1.0);
  std::vector<double> f(m.num_cells()), df(m.num_cells());
  for (double& v : f) v = mid(rng);
  for (double& v : df) v = dir(rng);
  // Zero-mean direction keeps the prescribed total mass.
  double mean = 0.0;
  for (std::size_t c = 0; c < df.size(); ++c) mean += df[c] * m.cell_area()[c];
  mean /= m.total_area();
  for (double& v : df) v -= mean;

  const double h = 1e-3;
  std::vector<double> fp(f), fm(f);
  for (std::size_t c = 0; c < f.size(); ++c) {
    fp[c] += h * df[c];
    fm[c] -= h * df[c];
  }
  const double fd = (problem.evaluate_field(fp).objective - problem.evaluate_field(fm).objective) / (2 * h);
  const double analytic = l2_pairing(problem.evaluate_field(f).gradient, df, m);
  EXPECT_NEAR(fd, analytic, 1e-4 * std::abs(analytic));
}

TEST(EigenEvaluate, EmptyPhaseIsScaledLaplacian) {
  const Mesh m = build_rect_mesh(16, 8, 2.0, 1.0);
  const ProblemParams p{2.0, 5.0, 0.3};
  const BangBangDensity empty{Indicator(m.num_cells(), 0), p};
  const auto e = eigen_evaluate(m, empty);
  const DirichletSolver solver(assemble_stiffness(m), m);
  const double unit =
      solver.principal_eig(assemble_weighted_mass(m, std::vector<double>(m.num_cells(), 1.0))).lambda;
  EXPECT_NEAR(e.objective, unit / 2.0, 1e-10 * unit);
  ASSERT_TRUE(e.eigenvalue.has_value());
  EXPECT_LT(e.consistency, 1e-8);
}

TEST(EigenEvaluate, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  const Mesh m = build_rect_mesh(12, 6, 2.0, 1.0);
  const EigenProblem problem(m);
  std::uniform_real_distribution<double> mid(3.0, 8.0), dir(-1.0, 1.0);
  std::vector<double> f(m.num_cells()), df(m.num_cells());
  for (double& v : f) v = mid(rng);
  for (double& v : df) v = dir(rng);
  const double h = 1e-3;
  std::vector<double> fp(f), fm(f);
  for (std::size_t c = 0; c < f.size(); ++c) {
    fp[c] += h * df[c];
    fm[c] -= h * df[c];
  }
  const double fd = (problem.evaluate_field(fp).objective - problem.evaluate_field(fm).objective) / (2 * h);
  // The ascent field is -dlambda/df.
  const double analytic = -l2_pairing(problem.evaluate_field(f).gradient, df, m);
  EXPECT_NEAR(fd, analytic, 1e-4 * std::abs(analytic));
}

TEST(EigenEvaluate, OneRearrangementStepDecreasesLambda) {
  const Mesh m = build_rect_mesh(16, 8, 2.0, 1.0);
  const EigenProblem problem(m);
  const double volume = kParams.target_volume(m.total_area());
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto f = random_density(m, kParams, seed);
    const auto e = problem.evaluate(f);
    ASSERT_GT(stationarity_residual(e.gradient, f, m), 0.0);
    const BangBangDensity next{bathtub_threshold(e.gradient, m, volume), kParams};
    EXPECT_LT(problem.evaluate(next).objective, e.objective - 1e-10) << "seed " << seed;
  }
}

TEST(Stationarity, ZeroAtThresholdAndForFlatGradient) {
  const Mesh m = build_rect_mesh(8, 4, 2.0, 1.0);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> dist;
  std::vector<double> g(m.num_cells());
  for (double& v : g) v = dist(rng);
  const BangBangDensity best{bathtub_threshold(g, m, kParams.target_volume(m.total_area())), kParams};
  EXPECT_EQ(stationarity_residual(g, best, m), 0.0);

  const std::vector<double> flat(m.num_cells(), 0.7);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    EXPECT_NEAR(stationarity_residual(flat, random_density(m, kParams, seed), m), 0.0, 1e-14);
  }
}

TEST(Stationarity, MatchesExhaustiveSearch) {
  const Mesh m = build_rect_mesh(3, 2, 1.0, 1.0);  // 12 equal cells
  const ProblemParams p{1.0, 4.0, 0.34};            // 4 cells fit in V
  const double cell = m.cell_area()[0];
  std::mt19937_64 rng(99);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> g(12);
    for (double& v : g) v = dist(rng);
    const auto f = random_density(m, p, 1000 + trial);
    ASSERT_EQ(std::count(f.indicator.begin(), f.indicator.end(), 1), 4);
    std::vector<double> weight(12);
    double current = 0.0;
    for (int c = 0; c < 12; ++c) {
      weight[c] = g[c] * cell;
      if (f.indicator[c]) current += weight[c];
    }
    const double expected = p.contrast() * (oracle::best_subset_sum(weight, 4) - current);
    EXPECT_NEAR(stationarity_residual(g, f, m), expected, 1e-12);
  }
}
