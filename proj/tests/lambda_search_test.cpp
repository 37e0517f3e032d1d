#include <gtest/gtest.h>

#include <cmath>

#include "qcx/field.hpp"
#include "qcx/lambda_search.hpp"
#include "qcx/linalg.hpp"
#include "qcx/sampling.hpp"

namespace qcx {
namespace {

TEST(ConvexificationMatrix, ZeroLambdaIsTheHessian) {
  const PointE p{1, 1, 1};
  const ConvexificationMatrix m = convexification_matrix(p, Alpha(2.0), 0.0);
  EXPECT_EQ(m.matrix, hess_u(p, Alpha(2.0)));
  EXPECT_DOUBLE_EQ(m.matrix.zz, 4.0);
  EXPECT_TRUE(std::isinf(m.log_prefactor));
  // For alpha <= 1 the lambda -> 0 limit is indefinite.
  const Sym3 h = convexification_matrix(p, Alpha(0.5), 0.0).matrix;
  const auto e = eigenvalues(h);
  EXPECT_LT(e[0], 0.0);
  EXPECT_GT(e[2], 0.0);
  EXPECT_THROW(convexification_matrix(p, Alpha(2.0), -1.0), DomainError);
}

TEST(ConvexificationMatrix, LogPrefactor) {
  const PointE p{1, 1, 1};
  const ConvexificationMatrix m = convexification_matrix(p, Alpha(2.0), 3.0);
  EXPECT_DOUBLE_EQ(m.log_prefactor, std::log(3.0) + 3.0 * 2.0);
}

TEST(ConvexificationMatrix, RadialQuadraticVanishes) {
  // <p, M p> = <p, D^2u p> + lambda <Du, p>^2 = 0 for every lambda.
  Sampler s(61);
  for (int i = 0; i < 200; ++i) {
    const PointE p = s.point(0.1, 10);
    const Alpha a(s.uniform(1.01, 3));
    const double lambda = s.log_uniform(1e-2, 1e8);
    const Sym3 m = convexification_matrix(p, a, lambda).matrix;
    const Vec3 pv(p);
    EXPECT_LE(std::abs(m.quadratic(pv)), 1e-10 * m.frobenius() * dot(pv, pv));
    // M p = -Du, independent of lambda.
    EXPECT_LE(norm(m.apply(pv) + grad_u(p, a)), 1e-8 * m.frobenius() * norm(pv));
  }
}

TEST(ConvexificationMatrix, MinEigenvalueNondecreasingInLambda) {
  Sampler s(62);
  for (int i = 0; i < 50; ++i) {
    const PointE p = s.point(0.2, 5);
    const Alpha a(s.uniform(1.05, 3));
    double prev = convexification_min_eigenvalue(p, a, 0.0);
    for (double lambda = 0.25; lambda < 1e4; lambda *= 2.0) {
      const double cur = convexification_min_eigenvalue(p, a, lambda);
      EXPECT_GE(cur, prev - 1e-12 * (1.0 + lambda));
      prev = cur;
    }
    EXPECT_LT(prev, 0.0);
  }
}

TEST(IsPsd, Examples) {
  EXPECT_TRUE(is_psd(Sym3{1, 2, 3, 0, 0, 0}));
  EXPECT_TRUE(is_psd(Sym3{1, 1, 0, 0, 0, 0}));
  EXPECT_FALSE(is_psd(Sym3{1, -1e-6, 1, 0, 0, 0}));
  EXPECT_TRUE(is_psd(Sym3{1, -1e-14, 1, 0, 0, 0}));
}

TEST(MinConvexifyingLambda, NoStrictThresholdAtAlphaTwo) {
  try {
    min_convexifying_lambda({1, 1, 1}, Alpha(2.0));
    FAIL() << "expected NotConvexifiable";
  } catch (const NotConvexifiable& e) {
    const auto& d = e.diagnostics();
    EXPECT_EQ(d.reason, "strict");
    EXPECT_EQ(d.alpha, 2.0);
    EXPECT_GT(d.tolerance_threshold, 0.0);
    EXPECT_DOUBLE_EQ(d.lambda_reached, 1.01 * d.tolerance_threshold);
    EXPECT_LT(d.min_eigenvalue, 0.0);
    // The minimum eigenvalue behaves like -1 / (lambda |p|^2).
    EXPECT_NEAR(d.min_eigenvalue * d.lambda_reached * 3.0, -1.0, 1e-2);
  }
}

TEST(MinConvexifyingLambda, EveryLadderAlphaFails) {
  for (double al : {1.05, 1.1, 1.25, 1.5, 2.0, 3.0}) {
    EXPECT_THROW(min_convexifying_lambda({1, 1, 1}, Alpha(al)), NotConvexifiable)
        << al;
  }
}

TEST(MinConvexifyingLambda, NegativeControlBelowOne) {
  LambdaSearchOptions opt;
  opt.bypass_alpha_guard = true;
  EXPECT_THROW(min_convexifying_lambda({1, 1, 1}, Alpha(0.5), opt),
               NotConvexifiable);
}

TEST(MinConvexifyingLambda, GuardRejectsAlphaAtMostOne) {
  EXPECT_THROW(min_convexifying_lambda({1, 1, 1}, Alpha(1.0)), DomainError);
  EXPECT_THROW(min_convexifying_lambda({1, 1, 1}, Alpha(0.5)), DomainError);
}

TEST(MinConvexifyingLambda, CapIsReported) {
  LambdaSearchOptions opt;
  opt.lambda_cap = 10.0;
  try {
    min_convexifying_lambda({1, 1, 1}, Alpha(2.0), opt);
    FAIL() << "expected NotConvexifiable";
  } catch (const NotConvexifiable& e) {
    EXPECT_EQ(e.diagnostics().reason, "cap");
    EXPECT_LE(e.diagnostics().lambda_reached, 10.0);
  }
}

TEST(NeighborhoodCheck, ZeroRadiusPassesTrivially) {
  const LambdaResult r{{1, 1, 1}, Alpha(2.0), 1.0, 0.5, 0.0, 0.0};
  const NeighborhoodReport n = neighborhood_check(r, 0.0, 100);
  EXPECT_TRUE(n.requested_radius_passes);
  EXPECT_EQ(n.largest_passing_radius, 0.0);
}

TEST(NeighborhoodCheck, ReportsFailureAtTinyLambda) {
  const LambdaResult r{{1, 1, 1}, Alpha(2.0), 1.0, 0.5, 0.0, 0.0};
  const NeighborhoodReport n = neighborhood_check(r, 0.01, 50);
  EXPECT_FALSE(n.requested_radius_passes);
  EXPECT_EQ(n.largest_passing_radius, 0.0);
  EXPECT_LT(n.worst_min_eigenvalue, -1e-10);
}

TEST(NeighborhoodCheck, Deterministic) {
  const LambdaResult r{{1, 2, 3}, Alpha(1.5), 4.0, 0.1, 0.0, 0.0};
  const NeighborhoodReport a = neighborhood_check(r, 0.05, 40, 9);
  const NeighborhoodReport b = neighborhood_check(r, 0.05, 40, 9);
  EXPECT_EQ(a.worst_min_eigenvalue, b.worst_min_eigenvalue);
  EXPECT_EQ(a.worst_point, b.worst_point);
}

}  // namespace
}  // namespace qcx
