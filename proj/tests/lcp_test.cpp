#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ppocp/lcp.hpp"
#include "ppocp/simplex_qp.hpp"
#include "test_support.hpp"

namespace ppocp {
namespace {

using testing::vec;

const LcpVariant kVariants[] = {LcpVariant::PrimalSplit, LcpVariant::WolfeKkt, LcpVariant::DualOrthant};

double complementarity_scale(const LCPOutcome& O) { return 1.0 + O.w.norm() * O.v.norm(); }

TEST(CanonicalizeTest, SplitFormMatchesHandExpansion) {
  const CanonicalQP qp = canonicalize_primal(testing::triangle());
  Matrix H(4, 4);
  H << 1, 0, -1, 0, 0, 1, 0, -1, -1, 0, 1, 0, 0, -1, 0, 1;
  EXPECT_EQ(qp.H, H);
  Matrix A(3, 4);
  A << 2, 0, -2, 0, 0, 2, 0, -2, 2, 2, -2, -2;
  EXPECT_EQ(qp.A, A);
  EXPECT_EQ(qp.b, Vector::Ones(3));
  EXPECT_EQ(qp.p, Vector::Zero(4));
  const Vector ones = Vector::Ones(4);
  EXPECT_EQ(ones.dot(qp.H * ones), 0.0);
  EXPECT_EQ(qp.reconstruct_y(vec({3, 1, 1, 2})), vec({2, -1}));
}

TEST(BuildLcpTest, Dimensions) {
  EXPECT_EQ(build_lcp(testing::single_point(), LcpVariant::PrimalSplit).k, 5);
  EXPECT_EQ(build_lcp(testing::single_point(), LcpVariant::WolfeKkt).k, 3);
  EXPECT_EQ(build_lcp(testing::single_point(), LcpVariant::DualOrthant).k, 1);
  for (LcpVariant v : kVariants) {
    const LCPInstance L = build_lcp(testing::triangle(), v);
    EXPECT_EQ(L.M.rows(), L.k);
    EXPECT_EQ(L.M.cols(), L.k);
    EXPECT_EQ(L.q.size(), L.k);
    EXPECT_EQ(L.variant, v);
  }
}

TEST(BuildLcpTest, DualOrthantOnTriangle) {
  const LCPInstance L = build_lcp(testing::triangle(), LcpVariant::DualOrthant);
  Matrix M(3, 3);
  M << 2, 0, 2, 0, 2, 2, 2, 2, 4;
  EXPECT_EQ(L.M, M);
  EXPECT_EQ(L.q, -Vector::Ones(3));
}

TEST(BuildLcpTest, WolfeKktBlocks) {
  const LCPInstance L = build_lcp(testing::triangle(), LcpVariant::WolfeKkt);
  EXPECT_EQ(L.M.topLeftCorner(3, 3), 2.0 * gram_matrix(testing::triangle()).B);
  EXPECT_EQ(L.M.block(0, 3, 3, 1), -Vector::Ones(3));
  EXPECT_EQ(L.M.block(0, 4, 3, 1), Vector::Ones(3));
  EXPECT_EQ(L.M.bottomRightCorner(2, 2), Matrix::Zero(2, 2));
  EXPECT_EQ(L.q, vec({0, 0, 0, -1, 1}));
}

TEST(BuildLcpTest, AllVariantsArePositiveSemidefinite) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const Polyhedron P = testing::random_box_instance(rng, 12, 8, 5.0);
    for (LcpVariant v : kVariants) {
      const LCPInstance L = build_lcp(P, v);
      for (int probe = 0; probe < 50; ++probe) {
        const Vector x = testing::random_vector(rng, L.k);
        EXPECT_GE(x.dot(L.M * x), -1e-10 * (1.0 + x.squaredNorm() * L.M.norm()));
      }
    }
  }
}

TEST(LemkeTest, DualOrthantTriangle) {
  const LCPOutcome O = lemke_solve(build_lcp(testing::triangle(), LcpVariant::DualOrthant));
  ASSERT_TRUE(O.solved());
  EXPECT_LE((O.v - vec({0.5, 0.5, 0})).norm(), 1e-12);
  EXPECT_LE((O.w - vec({0, 0, 1})).norm(), 1e-12);
  EXPECT_LE(std::abs(O.w.dot(O.v)), 1e-12);
}

TEST(LemkeTest, DualOrthantSinglePoint) {
  const LCPOutcome O = lemke_solve(build_lcp(testing::single_point(), LcpVariant::DualOrthant));
  ASSERT_TRUE(O.solved());
  EXPECT_NEAR(O.v(0), 2.0 / 25.0, 1e-15);
  EXPECT_NEAR(O.w(0), 0.0, 1e-15);
}

TEST(LemkeTest, NonnegativeQIsSolvedWithoutPivots) {
  LCPInstance L;
  L.k = 2;
  L.M = Matrix::Identity(2, 2);
  L.q = vec({1, 0});
  const LCPOutcome O = lemke_solve(L);
  EXPECT_TRUE(O.solved());
  EXPECT_EQ(O.pivots, 0);
  EXPECT_EQ(O.v, Vector::Zero(2));
  EXPECT_EQ(O.w, L.q);
}

TEST(LemkeTest, RejectsInconsistentDimensions) {
  LCPInstance L;
  L.k = 3;
  L.M = Matrix::Identity(2, 2);
  L.q = vec({-1, 0});
  EXPECT_THROW(lemke_solve(L), DimensionMismatch);
}

TEST(LemkeTest, PrimalSplitRayOnSegmentThroughOrigin) {
  const Polyhedron P = testing::segment_through_origin();
  const LCPInstance L = build_lcp(P, LcpVariant::PrimalSplit);
  const LCPOutcome O = lemke_solve(L);
  EXPECT_EQ(O.status, LCPOutcome::Status::RayTermination);
  const ProjectionResult r = extract_projection(P, L, O);
  EXPECT_EQ(r.rho, Vector::Zero(2));
  EXPECT_TRUE(r.origin_inside);
}

TEST(LemkeTest, DebugStreamReceivesEveryPivot) {
  std::ostringstream trace;
  const LCPOutcome O = lemke_solve(build_lcp(testing::triangle(), LcpVariant::PrimalSplit), {}, &trace);
  ASSERT_TRUE(O.solved());
  std::size_t count = 0;
  for (std::size_t pos = trace.str().find("after pivot"); pos != std::string::npos;
       pos = trace.str().find("after pivot", pos + 1)) {
    ++count;
  }
  EXPECT_EQ(static_cast<long>(count), O.pivots);
}

TEST(LemkeTest, SolutionsAreComplementaryOnRandomInstances) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 100; ++trial) {
    const Polyhedron P = testing::random_box_instance(rng, 12, 8, 5.0);
    for (LcpVariant v : kVariants) {
      const LCPInstance L = build_lcp(P, v);
      const LCPOutcome O = lemke_solve(L);
      if (!O.solved()) continue;
      const double scale = 1.0 + L.M.norm() * O.v.norm();
      EXPECT_LE((O.w - (L.M * O.v + L.q)).norm(), 1e-12 * scale);
      EXPECT_GE(O.v.minCoeff(), 0.0);
      EXPECT_GE(O.w.minCoeff(), -1e-9 * scale);
      EXPECT_LE(std::abs(O.w.dot(O.v)), 1e-8 * complementarity_scale(O));
    }
  }
}

TEST(ExtractProjectionTest, TriangleChains) {
  const Polyhedron P = testing::triangle();
  for (LcpVariant v : kVariants) {
    const LCPInstance L = build_lcp(P, v);
    const ProjectionResult r = extract_projection(P, L, lemke_solve(L));
    EXPECT_LE((r.rho - vec({1, 1})).norm(), 1e-10) << variant_name(v);
    ASSERT_TRUE(r.alpha.has_value());
    EXPECT_LE((P.vertices().transpose() * *r.alpha - r.rho).norm(), 1e-10) << variant_name(v);
  }
  const LCPInstance W = build_lcp(P, LcpVariant::WolfeKkt);
  const LCPOutcome O = lemke_solve(W);
  EXPECT_LE((O.v.head(3) - vec({0.5, 0.5, 0})).norm(), 1e-10);
}

TEST(ExtractProjectionTest, RaysMatchOriginMembership) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    const Polyhedron in = testing::random_instance_containing_origin(rng, 12, 8, 5.0);
    const Polyhedron out = testing::random_instance_excluding_origin(rng, 12, 8, 5.0);
    EXPECT_FALSE(lemke_solve(build_lcp(in, LcpVariant::PrimalSplit)).solved());
    EXPECT_FALSE(lemke_solve(build_lcp(in, LcpVariant::DualOrthant)).solved());
    EXPECT_TRUE(lemke_solve(build_lcp(in, LcpVariant::WolfeKkt)).solved());
    for (LcpVariant v : kVariants) {
      const LCPInstance L = build_lcp(out, v);
      const LCPOutcome O = lemke_solve(L);
      ASSERT_TRUE(O.solved()) << variant_name(v);
      EXPECT_LE((extract_projection(out, L, O).rho - solve_wolfe(out).rho).norm(), 1e-6);
    }
  }
}

TEST(ExtractProjectionTest, WolfeRayIsInconsistent) {
  const Polyhedron P = testing::triangle();
  const LCPInstance L = build_lcp(P, LcpVariant::WolfeKkt);
  LCPOutcome fake;
  fake.status = LCPOutcome::Status::RayTermination;
  fake.v = Vector::Zero(L.k);
  fake.w = L.q;
  EXPECT_THROW(extract_projection(P, L, fake), InconsistentOutcome);
}

}  // namespace
}  // namespace ppocp
