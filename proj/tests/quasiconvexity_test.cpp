#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "qcx/field.hpp"
#include "qcx/quasiconvexity.hpp"
#include "qcx/sampling.hpp"

namespace qcx {
namespace {

TEST(SegmentTest, OracleExample) {
  const PointE p1{1, 2, 1}, p2{3, 1, 2};
  const SegmentSample s(p1, p2, 0.3);
  const PointE c = s.combination();
  EXPECT_DOUBLE_EQ(c.x(), 2.4);
  EXPECT_DOUBLE_EQ(c.y(), 1.3);
  EXPECT_DOUBLE_EQ(c.z(), 1.7);

  const double uc = oracle::u(2.4, 1.3, 1.7, 0.5);
  const double u1 = oracle::u(1, 2, 1, 0.5);
  const double u2 = oracle::u(3, 1, 2, 0.5);
  const SegmentResult r = segment_test(s, Alpha(0.5), 1e-10);
  EXPECT_NEAR(r.value, uc, 1e-14 * uc);
  EXPECT_NEAR(r.max_end, std::max(u1, u2), 1e-14 * u2);
  EXPECT_LT(r.margin, 0.0);
  EXPECT_NEAR(r.margin, uc - std::max(u1, u2), 1e-13);
  EXPECT_TRUE(r.pass);
}

TEST(SegmentTest, EndpointsAreTight) {
  const PointE p1{1, 2, 1}, p2{3, 1, 2};
  for (double l : {0.0, 1.0}) {
    const SegmentResult r = segment_test({p1, p2, l}, Alpha(0.5), 1e-10);
    EXPECT_LE(r.margin, 0.0);
    EXPECT_TRUE(r.pass);
  }
  EXPECT_THROW(SegmentSample(p1, p2, 1.5), DomainError);
  EXPECT_THROW(SegmentSample(p1, p2, -0.1), DomainError);
}

TEST(SegmentTest, SameRayIsFlat) {
  // u is constant on rays, so the whole segment sits at the same level.
  const PointE p1{1, 2, 3};
  const SegmentResult r =
      segment_test({p1, p1.scaled(4.0), 0.6}, Alpha(1.3), 1e-10);
  EXPECT_NEAR(r.margin, 0.0, 1e-14 * r.max_end);
  EXPECT_TRUE(r.pass);
}

TEST(MuDecompose, Examples) {
  const MuWeights w = mu_decompose({1, 1, 1}, {1, 1, 3}, 0.25);
  EXPECT_DOUBLE_EQ(w.mu1, 0.1);
  EXPECT_DOUBLE_EQ(w.mu2, 0.9);
  const MuWeights eq = mu_decompose({1, 2, 2}, {5, 1, 2}, 0.5);
  EXPECT_DOUBLE_EQ(eq.mu1, 0.5);
  EXPECT_DOUBLE_EQ(eq.mu2, 0.5);
  const MuWeights e1 = mu_decompose({1, 1, 1}, {1, 1, 9}, 1.0);
  EXPECT_EQ(e1.mu1, 1.0);
  EXPECT_EQ(e1.mu2, 0.0);
  const MuWeights e0 = mu_decompose({1, 1, 1}, {1, 1, 9}, 0.0);
  EXPECT_EQ(e0.mu1, 0.0);
  EXPECT_EQ(e0.mu2, 1.0);
  EXPECT_THROW(mu_decompose({1, 1, 1}, {1, 1, 1}, 2.0), DomainError);
}

TEST(MuIdentity, TrivialCases) {
  const PointE p1{1, 2, 3}, p2{4, 1, 2};
  EXPECT_LE(mu_identity_check(p1, p1, 0.4, Alpha(0.7)).relative, 1e-15);
  EXPECT_LE(mu_identity_check(p1, p2, 0.0, Alpha(0.7)).relative, 1e-15);
}

TEST(SegmentTest, DegenerateSegments) {
  const SegmentResult same = segment_test({{1, 1, 1}, {1, 1, 1}, 0.37}, Alpha(1.0), 1e-10);
  EXPECT_EQ(same.margin, 0.0);
  EXPECT_TRUE(same.pass);
  const SegmentResult ray = segment_test({{1, 1, 1}, {2, 2, 2}, 0.5}, Alpha(1.0), 1e-10);
  EXPECT_DOUBLE_EQ(ray.value, 2.0);
  EXPECT_DOUBLE_EQ(ray.max_end, 2.0);
  EXPECT_TRUE(ray.pass);
}

TEST(MuIdentity, OracleExample) {
  const PointE p1{1, 2, 1}, p2{3, 1, 2};
  const MuIdentity m = mu_identity_check(p1, p2, 0.3, Alpha(0.5));
  const double uc = oracle::u(2.4, 1.3, 1.7, 0.5);
  // mu1 = 0.3 / 1.7, mu2 = 1.4 / 1.7
  const oracle::big mu1 = oracle::big(3) / 17, mu2 = oracle::big(14) / 17;
  const oracle::big sx = mu1 * 1 + mu2 * oracle::big(3) / 2;
  const oracle::big sy = mu1 * 2 + mu2 * oracle::big(1) / 2;
  const double vm = oracle::v(static_cast<double>(sx), static_cast<double>(sy), 0.5);
  EXPECT_NEAR(vm, uc, 1e-15 * uc);
  EXPECT_NEAR(m.u_combination, uc, 1e-14 * uc);
  EXPECT_NEAR(m.v_mixture, uc, 1e-14 * uc);
  EXPECT_LT(m.relative, 1e-12);
}

TEST(ChainInequality, HoldsOnExample) {
  const SegmentSample s({1, 2, 1}, {3, 1, 2}, 0.3);
  const ChainInequality c = chain_inequality(s, Alpha(0.5), 1e-10);
  EXPECT_TRUE(c.pass);
  EXPECT_LE(c.u_combination, c.mu_average);
  EXPECT_LE(c.mu_average, c.max_end);
}

TEST(VConvexity, MidpointExample) {
  const Alpha a(1.0);
  const double mid = eval_v(2, 2, a);
  const double avg = 0.5 * (eval_v(1, 1, a) + eval_v(3, 3, a));
  EXPECT_DOUBLE_EQ(mid, 1.0);
  EXPECT_DOUBLE_EQ(avg, 4.0 / 3.0);
  EXPECT_LE(mid, avg);

  const std::vector<std::pair<double, double>> pair{{1, 4}, {4, 1}};
  const VConvexity r = v_convexity_check(pair, Alpha(0.5));
  EXPECT_TRUE(r.pass);
  // v(2.5, 2.5) = 2 / sqrt(2.5) against (1.5 + 1.5) / 2.
  EXPECT_NEAR(r.worst_midpoint_margin, (2 / std::sqrt(2.5) - 1.5) / 1.5, 1e-15);
}

TEST(VConvexity, HessianIsPositiveDiagonal) {
  const Diag2 h = hess_v(1, 2, Alpha(1.0));
  EXPECT_DOUBLE_EQ(h.ss, 2.0);
  EXPECT_DOUBLE_EQ(h.tt, 0.25);
}

TEST(VConvexity, GridCheck) {
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      grid.emplace_back(0.05 * std::pow(1.8, i), 0.05 * std::pow(1.8, j));
    }
  }
  for (double a : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const VConvexity r = v_convexity_check(grid, Alpha(a));
    EXPECT_TRUE(r.pass) << a;
    EXPECT_GT(r.min_hessian_diagonal, 0.0);
    EXPECT_LE(r.worst_midpoint_margin, 1e-12);
    EXPECT_EQ(r.hessian_points, 64u);
    EXPECT_EQ(r.midpoint_pairs, 64u * 63u / 2u);
  }
}

std::vector<SegmentSample> random_segments(std::uint64_t seed, std::size_t n,
                                           std::vector<double>& alphas) {
  Sampler s(seed);
  const double ladder[] = {0.25, 0.5, 1.0, 1.5, 2.0};
  std::vector<SegmentSample> out;
  out.reserve(n);
  alphas.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const PointE p1 = s.point(0.05, 20);
    const PointE p2 = s.point(0.05, 20);
    out.emplace_back(p1, p2, s.uniform(0.0, 1.0));
    alphas.push_back(ladder[i % 5]);
  }
  return out;
}

TEST(QuasiconvexityBatch, NoViolationsOnRandomSegments) {
  std::vector<double> alphas;
  const auto segs = random_segments(31, 20000, alphas);
  const QuasiconvexityBatch b =
      run_quasiconvexity_batch(segs, alphas, 1e-10, 1e-10, 2);
  EXPECT_EQ(b.samples, segs.size());
  EXPECT_EQ(b.violations, 0u);
  EXPECT_EQ(b.chain_violations, 0u);
  EXPECT_EQ(b.mu_violations, 0u);
  EXPECT_TRUE(b.failing_indices.empty());
  EXPECT_LE(b.worst_margin_ratio, 1e-10);
  EXPECT_LE(b.worst_mu_relative, 1e-10);
}

TEST(QuasiconvexityBatch, IndependentOfThreadCount) {
  std::vector<double> alphas;
  const auto segs = random_segments(32, 5000, alphas);
  const QuasiconvexityBatch one =
      run_quasiconvexity_batch(segs, alphas, 1e-10, 1e-10, 1);
  for (unsigned t : {2u, 3u, 8u}) {
    const QuasiconvexityBatch many =
        run_quasiconvexity_batch(segs, alphas, 1e-10, 1e-12, t);
    EXPECT_EQ(many.worst_margin_ratio, one.worst_margin_ratio);
    EXPECT_EQ(many.worst_index, one.worst_index);
    EXPECT_EQ(many.worst_mu_relative, one.worst_mu_relative);
    EXPECT_EQ(many.worst_mu_index, one.worst_mu_index);
    EXPECT_EQ(many.failing_indices, one.failing_indices);
  }
}

TEST(QuasiconvexityBatch, DetectsAnInjectedViolation) {
  // With a negative tolerance even the exact endpoints register as failures.
  const std::vector<SegmentSample> segs{{{1, 1, 1}, {1, 1, 1}, 0.5}};
  const std::vector<double> alphas{1.0};
  const QuasiconvexityBatch b =
      run_quasiconvexity_batch(segs, alphas, -1e-3, 1e-12, 1);
  EXPECT_EQ(b.violations, 1u);
  ASSERT_EQ(b.failing_indices.size(), 1u);
  EXPECT_EQ(b.failing_indices[0], 0u);
}

TEST(QuasiconvexityBatch, RejectsMismatchedInputs) {
  const std::vector<SegmentSample> segs{{{1, 1, 1}, {2, 1, 1}, 0.5}};
  const std::vector<double> alphas;
  EXPECT_THROW(run_quasiconvexity_batch(segs, alphas, 1e-10, 1e-10, 1),
               DomainError);
}

}  // namespace
}  // namespace qcx
