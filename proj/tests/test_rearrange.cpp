#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "twophase/cli.hpp"
#include "twophase/errors.hpp"
#include "twophase/rearrange.hpp"

using namespace twophase;

namespace {

const ProblemParams kParams{1.0, 10.0, 0.2};

// Four cells of area 1/4 each.
Mesh four_cells() { return build_rect_mesh(2, 1, 2.0, 0.5); }

bool objective_monotone(const History& h, Sense sense, double tol) {
  double prev = h.initial_objective;
  for (const auto& r : h.records) {
    if (sense == Sense::maximize && r.objective < prev - tol) return false;
    if (sense == Sense::minimize && r.objective > prev + tol) return false;
    prev = r.objective;
  }
  return true;
}

}  // namespace

TEST(Bathtub, PicksLargestValues) {
  const Mesh m = four_cells();
  ASSERT_DOUBLE_EQ(m.cell_area()[0], 0.25);
  const std::vector<double> g{3, 1, 2, 0};
  EXPECT_EQ(bathtub_threshold(g, m, 0.5), (Indicator{1, 0, 1, 0}));
}

TEST(Bathtub, TiesBrokenByIndex) {
  const Mesh m = four_cells();
  const std::vector<double> g(4, 5.0);
  EXPECT_EQ(bathtub_threshold(g, m, 0.25 * m.total_area()), (Indicator{1, 0, 0, 0}));
  EXPECT_EQ(bathtub_threshold(g, m, 0.6 * m.total_area()), (Indicator{1, 1, 0, 0}));
}

TEST(Bathtub, MatchesExhaustiveSubsetSearch) {
  const Mesh m = build_rect_mesh(4, 2, 1.0, 1.0);  // 16 equal cells
  const double cell = m.cell_area()[0];
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> g(16);
    for (double& v : g) v = dist(rng);
    const auto d = bathtub_threshold(g, m, 0.375 * m.total_area());
    ASSERT_EQ(std::count(d.begin(), d.end(), 1), 6);
    std::vector<double> weight(16);
    double got = 0.0;
    for (int c = 0; c < 16; ++c) {
      weight[c] = g[c] * cell;
      if (d[c]) got += weight[c];
    }
    EXPECT_NEAR(got, oracle::best_subset_sum(weight, 6), 1e-14);
  }
}

TEST(Bathtub, VolumeNeverExceedsTargetOnIrregularMesh) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> jitter(-0.03, 0.03);
  const Mesh base = build_rect_mesh(10, 10, 1.0, 1.0);
  auto verts = base.vertices();
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (!base.is_boundary(v)) {
      verts[v][0] += jitter(rng);
      verts[v][1] += jitter(rng);
    }
  }
  const Mesh m(verts, base.triangles());
  std::normal_distribution<double> dist;
  for (double frac : {0.05, 0.2, 0.5, 0.77}) {
    std::vector<double> g(m.num_cells());
    for (double& v : g) v = dist(rng);
    const double target = frac * m.total_area();
    const BangBangDensity f{bathtub_threshold(g, m, target), ProblemParams{1, 2, frac}};
    EXPECT_TRUE(is_admissible(f, m)) << frac;
    EXPECT_LE(f.volume(m), target * (1 + 1e-12));
  }
  EXPECT_THROW(bathtub_threshold(std::vector<double>(3), m, 0.1), InvalidArgument);
}

TEST(Extrapolate, Examples) {
  const std::vector<double> now{2, 0}, prev{1, 1};
  EXPECT_EQ(extrapolate(now, prev, 0.0), now);
  EXPECT_EQ(extrapolate(now, now, 0.8), now);
  EXPECT_EQ(extrapolate(now, prev, 0.5), (std::vector<double>{2.5, -0.5}));
  EXPECT_THROW(extrapolate(now, std::vector<double>{1}, 0.5), InvalidArgument);
}

TEST(Schedule, NesterovWeights) {
  EXPECT_EQ(nesterov_theta(0), 0.0);
  EXPECT_DOUBLE_EQ(nesterov_theta(1), 0.25);
  EXPECT_DOUBLE_EQ(nesterov_theta(9), 0.75);
}

class RunTest : public ::testing::Test {
 protected:
  Mesh mesh = build_rect_mesh(32, 16, 2.0, 1.0);
  BangBangDensity start{cli::default_indicator(mesh, kParams), kParams};
};

TEST_F(RunTest, RmPoissonMonotoneToFixedPoint) {
  const PoissonProblem problem(mesh);
  const auto h = run(problem, start, {Method::RM, 0.0, 200, {}});
  EXPECT_EQ(h.reason, Termination::DiffZero);
  EXPECT_EQ(h.records.back().diff_l2, 0.0);
  EXPECT_TRUE(objective_monotone(h, Sense::maximize, 1e-9));
  for (std::size_t i = 0; i < h.records.size(); ++i) {
    EXPECT_EQ(h.records[i].k, static_cast<int>(i));
    EXPECT_EQ(h.records[i].theta, 0.0);
    EXPECT_FALSE(h.records[i].restarted);
  }
  EXPECT_LE(stationarity_residual(h.final_evaluation.gradient, h.final_density, mesh),
            1e-9 * std::abs(h.final_evaluation.objective));
  EXPECT_LT(h.worst_consistency, 1e-10);
}

TEST_F(RunTest, FixedPointStartStopsImmediately) {
  const PoissonProblem problem(mesh);
  const auto first = run(problem, start, {Method::RM, 0.0, 200, {}});
  const auto again = run(problem, first.final_density, {Method::RM, 0.0, 200, {}});
  ASSERT_EQ(again.iterations(), 1);
  EXPECT_EQ(again.records[0].diff_l2, 0.0);
  EXPECT_EQ(again.reason, Termination::DiffZero);
  EXPECT_EQ(again.final_density.indicator, first.final_density.indicator);
}

TEST_F(RunTest, ArmWithZeroScheduleReproducesRm) {
  const EigenProblem problem(mesh);
  const auto rm = run(problem, start, {Method::RM, 0.0, 200, {}});
  const auto arm = run(problem, start, {Method::ARM, 0.0, 200, [](int) { return 0.0; }});
  ASSERT_EQ(rm.iterations(), arm.iterations());
  for (std::size_t i = 0; i < rm.records.size(); ++i) {
    EXPECT_EQ(rm.records[i].objective, arm.records[i].objective);
    EXPECT_EQ(rm.records[i].diff_l2, arm.records[i].diff_l2);
  }
  EXPECT_EQ(rm.final_density.indicator, arm.final_density.indicator);
}

TEST_F(RunTest, ArmUsesScheduleFromSecondIteration) {
  const PoissonProblem problem(mesh);
  const auto h = run(problem, start, {Method::ARM, 0.0, 5, {}});
  ASSERT_GE(h.iterations(), 2);
  EXPECT_EQ(h.records[0].theta, 0.0);
  for (std::size_t i = 1; i < h.records.size(); ++i) {
    EXPECT_DOUBLE_EQ(h.records[i].theta, nesterov_theta(static_cast<int>(i)));
  }
}

TEST_F(RunTest, RarmEigenMonotone) {
  const EigenProblem problem(mesh);
  const auto h = run(problem, start, {Method::RARM, 0.0, 200, {}});
  EXPECT_EQ(h.reason, Termination::DiffZero);
  EXPECT_TRUE(objective_monotone(h, Sense::minimize, 1e-9));
  // After a restart the counter resets: the next weight is 1/4.
  for (std::size_t i = 0; i + 1 < h.records.size(); ++i) {
    if (h.records[i].restarted && h.records[i + 1].diff_l2 > 0.0 && !h.records[i + 1].restarted) {
      EXPECT_DOUBLE_EQ(h.records[i + 1].theta, 0.25);
    }
  }
  EXPECT_LT(h.worst_consistency, 1e-8);
}

TEST_F(RunTest, EveryIterateIsAdmissible) {
  const PoissonProblem problem(mesh);
  for (int cap = 1; cap <= 6; ++cap) {
    for (Method m : {Method::RM, Method::ARM, Method::RARM}) {
      const auto h = run(problem, start, {m, 0.0, cap, {}});
      EXPECT_TRUE(is_admissible(h.final_density, mesh)) << to_string(m) << " cap " << cap;
    }
  }
}

TEST_F(RunTest, TerminationReasons) {
  const PoissonProblem problem(mesh);
  const auto capped = run(problem, start, {Method::RM, 0.0, 2, {}});
  EXPECT_EQ(capped.reason, Termination::MaxIter);
  EXPECT_EQ(capped.iterations(), 2);
  const auto loose = run(problem, start, {Method::RM, 1e6, 50, {}});
  EXPECT_EQ(loose.reason, Termination::Epsilon);
  EXPECT_EQ(loose.iterations(), 1);
}

TEST_F(RunTest, RejectsInadmissibleStart) {
  const PoissonProblem problem(mesh);
  BangBangDensity bad = start;
  std::fill(bad.indicator.begin(), bad.indicator.end(), 1);
  EXPECT_THROW(run(problem, bad, {}), InvalidArgument);
  BangBangDensity short_length{Indicator(3, 0), kParams};
  EXPECT_THROW(run(problem, short_length, {}), InvalidArgument);
  EXPECT_THROW(run(problem, start, {Method::RM, -1.0, 10, {}}), InvalidArgument);
}
