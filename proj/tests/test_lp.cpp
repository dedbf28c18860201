#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sposs/error.hpp"
#include "sposs/harness.hpp"
#include "sposs/lp.hpp"
#include "sposs/stochastic.hpp"

using namespace sposs;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Lp, TextbookExample) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
  DenseLp lp{{3, 5}, {{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {kInf, kInf}, {}};
  auto sol = solve(lp);
  EXPECT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.value, 36.0, 1e-12);
  EXPECT_NEAR(sol.x[0], 2.0, 1e-12);
  EXPECT_NEAR(sol.x[1], 6.0, 1e-12);
  EXPECT_LE(sol.max_residual, kLpTolerance);
}

TEST(Lp, UpperBoundsFlip) {
  DenseLp lp{{1, 1, 1}, {{1, 1, 1}}, {10}, {0.5, 0.25, 2}, {}};
  auto sol = solve(lp);
  EXPECT_NEAR(sol.value, 2.75, 1e-12);
}

TEST(Lp, NegativeObjectiveStaysAtZero) {
  DenseLp lp{{-1, -2}, {{1, 1}}, {1}, {1, 1}, {}};
  auto sol = solve(lp);
  EXPECT_DOUBLE_EQ(sol.value, 0.0);
}

TEST(Lp, UnboundedThrows) {
  DenseLp lp{{1, 0}, {{-1, 1}}, {1}, {kInf, kInf}, {}};
  EXPECT_THROW(solve(lp), InvariantError);
}

TEST(Lp, DegenerateCyclingExample) {
  // Beale's example, which cycles under the largest-coefficient rule.
  DenseLp lp{{0.75, -150, 0.02, -6},
             {{0.25, -60, -0.04, 9}, {0.5, -90, -0.02, 3}, {0, 0, 1, 0}},
             {0, 0, 1},
             {kInf, kInf, kInf, kInf},
             {}};
  auto sol = solve(lp);
  EXPECT_NEAR(sol.value, 0.05, 1e-12);
}

TEST(Lp, AgreesWithVertexEnumeration) {
  std::mt19937_64 gen(61);
  std::uniform_real_distribution<double> coef(-1, 1), pos(0.1, 2);
  for (int iter = 0; iter < 150; ++iter) {
    const std::size_t n = 1 + gen() % 6, m = 1 + gen() % 4;
    DenseLp lp;
    for (std::size_t j = 0; j < n; ++j) {
      lp.objective.push_back(coef(gen));
      lp.upper.push_back(pos(gen));
    }
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<double> row(n);
      for (auto& v : row) v = coef(gen);
      lp.rows.push_back(row);
      lp.rhs.push_back(pos(gen) - 0.1);
    }
    auto sol = solve(lp);
    ASSERT_NEAR(sol.value, lp_vertex_enumeration(lp), 1e-9);
    ASSERT_LE(lp_max_residual(lp, sol.x), 1e-9);
  }
}

TEST(Lp, DumpListsRows) {
  DenseLp lp{{1, 2}, {{1, 1}}, {3}, {1, 1}, {"a", "b"}};
  const std::string s = lp.dump();
  EXPECT_NE(s.find("a"), std::string::npos);
  EXPECT_NE(s.find("<="), std::string::npos);
}

TEST(CoverageLp, UniformMatroid) {
  SppInstance inst("c", SetSystem::single_matroid(MatroidOracle::uniform(3, 1)),
                   Objective::coverage(4, {{0, 1}, {1, 2}, {3}}), 1.0, 0);
  auto built = build_coverage_lp(inst);
  EXPECT_EQ(built.elements, 3u);
  EXPECT_EQ(built.points, 4u);
  auto sol = solve_coverage_lp(inst);
  // One element, covering two points.
  EXPECT_NEAR(sol.value, 2.0, 1e-9);
  double sum = 0;
  for (double v : sol.x) sum += v;
  EXPECT_LE(sum, 1.0 + 1e-9);
}

TEST(CoverageLp, PartitionAndCap) {
  SppInstance inst(
      "c",
      SetSystem::single_matroid(MatroidOracle::partition({{0, 1}, {2, 3}}, {1, 1})),
      Objective::coverage(4, {{0}, {1}, {2}, {3}}, true), 0.3, 0);
  auto sol = solve_coverage_lp(inst);
  // Every x capped at p, two per block: 4 * 0.3 / 4 points.
  EXPECT_NEAR(sol.value, 0.3 * 4 / 4.0, 1e-9);
}

TEST(CoverageLp, RejectsUnsupportedSystems) {
  SppInstance inst("m", SetSystem::matching(Graph{2, {{0, 1}}}),
                   Objective::coverage(1, {{0}}), 0.5, 0);
  EXPECT_THROW(build_coverage_lp(inst), KindError);
}
