#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qcx/types.hpp"

namespace qcx {

/// Endpoint pair and mixing weight: the tested point is
/// lambda * p1 + (1 - lambda) * p2.
struct SegmentSample {
  PointE p1;
  PointE p2;
  double lambda;

  SegmentSample(PointE a, PointE b, double l);
  PointE combination() const;
};

struct SegmentResult {
  double value;      // u at the combination
  double max_end;    // max(u(p1), u(p2))
  double margin;     // value - max_end, <= 0 when the inequality holds
  double threshold;  // tol * (1 + |max_end|)
  bool pass;
};

/// Checks u(lambda p1 + (1 - lambda) p2) <= max(u(p1), u(p2)).
SegmentResult segment_test(const SegmentSample& s, Alpha a, double tol);

struct MuWeights {
  double mu1;
  double mu2;
};

/// mu_i = lambda_i z_i / (lambda_1 z_1 + lambda_2 z_2), lambda_1 = lambda,
/// lambda_2 = 1 - lambda.
MuWeights mu_decompose(const PointE& p1, const PointE& p2, double lambda);

struct MuIdentity {
  double u_combination;
  double v_mixture;
  double residual;  // |u_combination - v_mixture|
  double relative;  // residual / |u_combination|
};

/// Compares u at the convex combination against v evaluated at the
/// mu-weighted mixture of (x_i / z_i, y_i / z_i). The two sides are
/// computed along independent paths.
MuIdentity mu_identity_check(const PointE& p1, const PointE& p2,
                             double lambda, Alpha a);

struct ChainInequality {
  double u_combination;
  double mu_average;  // mu1 u(p1) + mu2 u(p2)
  double max_end;
  bool pass;
};

/// u(comb) <= mu1 u(p1) + mu2 u(p2) <= max(u(p1), u(p2)), each step with
/// slack tol * (1 + |max_end|).
ChainInequality chain_inequality(const SegmentSample& s, Alpha a, double tol);

struct VConvexity {
  bool pass;
  double min_hessian_diagonal;  // smallest eigenvalue seen (Hessian is diagonal)
  double worst_midpoint_margin;  // max of v(mid) - avg, relative to avg
  std::size_t hessian_points;
  std::size_t midpoint_pairs;
};

/// Convexity of v on a grid: the closed-form Hessian eigenvalues are
/// nonnegative at every grid point, and midpoint convexity holds for every
/// pair of grid points to 1e-12 relative.
VConvexity v_convexity_check(std::span<const std::pair<double, double>> grid,
                             Alpha a);

struct QuasiconvexityBatch {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t chain_violations = 0;
  std::size_t mu_violations = 0;
  double worst_margin_ratio = -1e300;  // max over samples of margin / (1 + |max|)
  std::size_t worst_index = 0;
  double worst_mu_relative = 0.0;
  std::size_t worst_mu_index = 0;
  std::vector<std::size_t> failing_indices;  // segment or mu failures
};

/// Runs segment_test, chain_inequality and mu_identity_check over the batch.
/// alphas[i] pairs with samples[i]. Work is split across `threads` workers;
/// the reduction is in sample order, so the result is thread-count invariant.
QuasiconvexityBatch run_quasiconvexity_batch(
    std::span<const SegmentSample> samples, std::span<const double> alphas,
    double tol, double mu_tol, unsigned threads = 1);

}  // namespace qcx
