#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "ppocp/simplex_qp.hpp"
#include "test_support.hpp"

namespace ppocp {
namespace {

using testing::make_polyhedron;
using testing::vec;

TEST(PhiTest, Examples) {
  EXPECT_EQ(phi(testing::segment_through_origin(), vec({0.5, 0.5})), 0.0);
  EXPECT_EQ(phi(testing::single_point(), vec({1})), 25.0);
  EXPECT_DOUBLE_EQ(phi(testing::triangle(), vec({0.5, 0.5, 0})), 2.0);
}

TEST(PhiTest, RejectsWeightsOffTheSimplex) {
  EXPECT_THROW(phi(testing::triangle(), vec({0.5, 0.5})), DimensionMismatch);
  EXPECT_THROW(phi(testing::triangle(), vec({0.6, 0.6, 0})), SimplexViolation);
  EXPECT_THROW(phi(testing::triangle(), vec({1.5, -0.5, 0})), SimplexViolation);
  EXPECT_THROW(optimality_gap(testing::triangle(), vec({1, 1, 1})), SimplexViolation);
}

TEST(OptimalityGapTest, Examples) {
  EXPECT_NEAR(optimality_gap(testing::triangle(), vec({0.5, 0.5, 0})), 0.0, 1e-15);
  EXPECT_EQ(optimality_gap(testing::single_point(), vec({1})), 0.0);
  EXPECT_DOUBLE_EQ(optimality_gap(testing::triangle(), vec({1, 0, 0})), 4.0);
}

TEST(SolveWolfeTest, TriangleMatchesGridSearch) {
  const Polyhedron P = testing::triangle();
  const testing::GridMinimum grid = testing::grid_minimum_triangle(P.vertices(), 1e-3);
  EXPECT_NEAR(grid.value, 2.0, 1e-12);
  EXPECT_LE((grid.alpha - vec({0.5, 0.5, 0})).norm(), 1e-9);

  const SimplexSolution s = solve_wolfe(P);
  EXPECT_LE((s.rho - vec({1, 1})).norm(), 1e-7);
  EXPECT_LE((s.alpha - vec({0.5, 0.5, 0})).norm(), 1e-7);
  EXPECT_NEAR(s.phi, 2.0, 1e-7);
  EXPECT_LE(s.gap, 1e-8);
  EXPECT_FALSE(s.origin_inside);
}

TEST(SolveWolfeTest, SegmentThroughOrigin) {
  const SimplexSolution s = solve_wolfe(testing::segment_through_origin());
  EXPECT_LE(s.phi, 1e-8);
  EXPECT_TRUE(s.origin_inside);
  EXPECT_LE(s.rho.norm(), 1e-7);
}

TEST(SolveWolfeTest, SinglePoint) {
  const SimplexSolution s = solve_wolfe(testing::single_point());
  EXPECT_EQ(s.rho, vec({3, 4}));
  EXPECT_DOUBLE_EQ(s.rho.norm(), 5.0);
  EXPECT_FALSE(s.origin_inside);
}

TEST(SolveWolfeTest, LineExampleContainsOrigin) {
  const SimplexSolution s = solve_wolfe(testing::line_points());
  EXPECT_TRUE(s.origin_inside);
}

TEST(SolveWolfeTest, ObjectiveNeverIncreases) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Polyhedron P = testing::random_box_instance(rng, 12, 8, 5.0);
    std::vector<double> trace;
    solve_wolfe(P, {}, [&](double v) { trace.push_back(v); });
    for (std::size_t i = 1; i < trace.size(); ++i) {
      EXPECT_LE(trace[i], trace[i - 1] * (1.0 + 1e-12) + 1e-15) << "step " << i;
    }
  }
}

TEST(SolveWolfeTest, RhoUniqueUnderSingularGram) {
  // B is singular here and the optimal weights are not unique.
  const Polyhedron a = make_polyhedron({{1, 0}, {2, 0}});
  const Polyhedron b = make_polyhedron({{2, 0}, {1, 0}, {1.5, 0}, {1, 0}});
  const SimplexSolution sa = solve_wolfe(a);
  const SimplexSolution sb = solve_wolfe(b);
  EXPECT_LE((sa.rho - vec({1, 0})).norm(), 1e-7);
  EXPECT_LE((sa.rho - sb.rho).norm(), 1e-7);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Polyhedron P = testing::random_box_instance(rng, 10, 3, 5.0);
    std::vector<Index> perm(static_cast<std::size_t>(P.m()));
    for (Index i = 0; i < P.m(); ++i) perm[static_cast<std::size_t>(i)] = P.m() - 1 - i;
    Matrix Z(P.m(), P.n());
    for (Index i = 0; i < P.m(); ++i) Z.row(i) = P.vertices().row(perm[static_cast<std::size_t>(i)]);
    EXPECT_LE((solve_wolfe(P).rho - solve_wolfe(Polyhedron(Z)).rho).norm(), 1e-7);
  }
}

TEST(SolveWolfeTest, SolutionSatisfiesCriterion) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Polyhedron P = testing::random_box_instance(rng, 12, 8, 5.0);
    const SimplexSolution s = solve_wolfe(P);
    EXPECT_GE(s.alpha.minCoeff(), 0.0);
    EXPECT_NEAR(s.alpha.sum(), 1.0, 1e-12);
    EXPECT_LE((P.vertices().transpose() * s.alpha - s.rho).norm(), 1e-10);
    EXPECT_LE(optimality_gap(P, s.alpha), 1e-8);
    EXPECT_GE(vi_residuals(P, s.rho).minCoeff(), -1e-8);
  }
}

TEST(SolveWolfeTest, IterationLimitCarriesBestIterate) {
  const Polyhedron P = make_polyhedron({{1, 0}, {0, 1}, {3, -1}, {-1, 3}, {4, 4}});
  ToleranceConfig cfg;
  cfg.max_iter = 1;
  cfg.opt_tol = 1e-300;
  try {
    solve_wolfe(P, cfg);
    FAIL() << "expected MaxIterExceeded";
  } catch (const MaxIterExceeded<SimplexSolution>& e) {
    EXPECT_EQ(e.best().alpha.size(), P.m());
    EXPECT_NEAR(e.best().alpha.sum(), 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace ppocp
