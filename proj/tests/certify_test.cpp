#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ppocp/certify.hpp"
#include "test_support.hpp"

namespace ppocp {
namespace {

using testing::make_polyhedron;
using testing::vec;

TEST(ReferenceProjectionTest, Examples) {
  EXPECT_LE((reference_projection(testing::triangle()).rho - vec({1, 1})).norm(), 1e-12);
  EXPECT_LE((reference_projection(testing::single_point()).rho - vec({3, 4})).norm(), 1e-12);
  const ProjectionResult seg = reference_projection(testing::segment_through_origin());
  EXPECT_LE(seg.rho.norm(), 1e-12);
  EXPECT_TRUE(seg.origin_inside);
  EXPECT_EQ(seg.route, Route::Oracle);
}

TEST(ReferenceProjectionTest, MatchesTriangleGrid) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix Z(3, 2);
    for (Index i = 0; i < 3; ++i) Z.row(i) = testing::random_vector(rng, 2, 3.0).transpose();
    const testing::GridMinimum grid = testing::grid_minimum_triangle(Z, 2e-3);
    const ProjectionResult r = reference_projection(Polyhedron(Z));
    // The grid minimum is an upper bound within O(step) of the optimum.
    EXPECT_LE(r.rho.squaredNorm(), grid.value + 1e-12);
    EXPECT_GE(r.rho.squaredNorm(), grid.value - 0.05);
  }
}

TEST(ReferenceProjectionTest, RefusesLargeInstances) {
  const Polyhedron P = make_polyhedron({{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}});
  EXPECT_THROW(reference_projection(P), OracleScaleExceeded);
}

TEST(CheckOptimalityTest, Examples) {
  const Certificate ok = check_optimality(testing::triangle(), vec({1, 1}), vec({0.5, 0.5, 0}));
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.vi_min, 0.0);
  EXPECT_FALSE(ok.zero_inside);

  const Certificate bad = check_optimality(testing::triangle(), vec({2, 2}));
  EXPECT_FALSE(bad.passed());
  EXPECT_EQ(bad.vi_min, -4.0);

  const Certificate zero = check_optimality(testing::segment_through_origin(), vec({0, 0}), vec({0.5, 0.5}));
  EXPECT_TRUE(zero.passed());
  EXPECT_TRUE(zero.zero_inside);
}

TEST(CheckOptimalityTest, WitnessMustReproduceRho) {
  const Certificate wrong = check_optimality(testing::triangle(), vec({1, 1}), vec({1, 0, 0}));
  EXPECT_FALSE(wrong.passed());
  const Certificate off_simplex = check_optimality(testing::triangle(), vec({1, 1}), vec({1, 1, 0}));
  EXPECT_FALSE(off_simplex.passed());
  const Certificate wrong_size = check_optimality(testing::triangle(), vec({1, 1}), vec({1, 0}));
  EXPECT_FALSE(wrong_size.passed());
}

TEST(DetectZeroMembershipTest, Examples) {
  EXPECT_EQ(detect_zero_membership(testing::segment_through_origin()).verdict(), true);
  EXPECT_EQ(detect_zero_membership(testing::line_points()).verdict(), true);
  EXPECT_EQ(detect_zero_membership(testing::triangle()).verdict(), false);
}

TEST(MembershipVotesTest, VerdictNeedsAllVotes) {
  MembershipVotes v;
  v.wolfe = true;
  v.dual = true;
  v.maximin = true;
  EXPECT_TRUE(v.unanimous());
  EXPECT_FALSE(v.verdict().has_value());
  v.lcp_primal = false;
  EXPECT_FALSE(v.unanimous());
  EXPECT_FALSE(v.verdict().has_value());
}

TEST(CrossCheckTest, Triangle) {
  const ConsensusReport rep = cross_check(testing::triangle());
  EXPECT_EQ(rep.verdict, ConsensusReport::Verdict::Agree);
  for (Route r : {Route::Wolfe, Route::Dual, Route::Maximin, Route::LcpPrimal, Route::LcpWolfe,
                  Route::LcpDual, Route::Oracle}) {
    const RouteReport* rr = rep.find(r);
    ASSERT_NE(rr, nullptr);
    ASSERT_TRUE(rr->result.has_value()) << route_name(r) << ": " << rr->message;
    EXPECT_LE((rr->result->rho - vec({1, 1})).norm(), 1e-7) << route_name(r);
    EXPECT_TRUE(rr->certificate->passed()) << route_name(r);
  }
  EXPECT_EQ(rep.find(Route::Nnls)->status, RouteReport::Status::NotApplicable);
  EXPECT_FALSE(rep.has_failures());
}

TEST(CrossCheckTest, TwoPointSegmentIncludesNnls) {
  const ConsensusReport rep = cross_check(make_polyhedron({{2, 0}, {0, 2}}));
  EXPECT_EQ(rep.verdict, ConsensusReport::Verdict::Agree);
  const RouteReport* nnls = rep.find(Route::Nnls);
  ASSERT_TRUE(nnls->result.has_value());
  EXPECT_LE((nnls->result->rho - vec({1, 1})).norm(), 1e-10);
}

TEST(CrossCheckTest, SinglePoint) {
  const ConsensusReport rep = cross_check(testing::single_point());
  EXPECT_EQ(rep.verdict, ConsensusReport::Verdict::Agree);
  const RouteReport* w = rep.find(Route::Wolfe);
  EXPECT_NEAR(w->result->distance, 5.0, 1e-12);
}

TEST(CrossCheckTest, OracleSupremacyAndTotalConsensus) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    const Polyhedron P = testing::random_box_instance(rng, 12, 8, 5.0);
    const ConsensusReport rep = cross_check(P);
    EXPECT_TRUE(rep.votes.complete()) << "trial " << trial;
    EXPECT_TRUE(rep.votes.unanimous()) << "trial " << trial;
    EXPECT_FALSE(rep.has_failures()) << "trial " << trial;
    EXPECT_EQ(rep.verdict, ConsensusReport::Verdict::Agree) << "trial " << trial;
    if (P.m() <= 4) {
      ASSERT_TRUE(rep.oracle_deviation.has_value());
      EXPECT_LE(*rep.oracle_deviation, 1e-5);
    }
  }
}

TEST(CrossCheckTest, DisagreementIsReportedNotArbitrated) {
  // An absurd zero threshold makes the simplex vote "inside" for a point at
  // distance 5 while the dual and LCP votes stay structural.
  ToleranceConfig cfg;
  cfg.zero_tol = 100.0;
  const ConsensusReport rep = cross_check(testing::single_point(), cfg);
  EXPECT_EQ(rep.votes.wolfe, true);
  EXPECT_EQ(rep.votes.dual, false);
  EXPECT_EQ(rep.verdict, ConsensusReport::Verdict::Conflict);
  EXPECT_THROW(detect_zero_membership(testing::single_point(), cfg), ConflictingCharacterizations);
}

}  // namespace
}  // namespace ppocp
