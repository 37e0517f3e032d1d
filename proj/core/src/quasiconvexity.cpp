#include "qcx/quasiconvexity.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "qcx/field.hpp"

namespace qcx {

SegmentSample::SegmentSample(PointE a, PointE b, double l)
    : p1(a), p2(b), lambda(l) {
  if (!(l >= 0.0 && l <= 1.0)) {
    throw DomainError("segment weight must lie in [0, 1], got " +
                      std::to_string(l));
  }
}

PointE SegmentSample::combination() const {
  const double m = 1.0 - lambda;
  return {lambda * p1.x() + m * p2.x(), lambda * p1.y() + m * p2.y(),
          lambda * p1.z() + m * p2.z()};
}

SegmentResult segment_test(const SegmentSample& s, Alpha a, double tol) {
  SegmentResult r;
  r.value = eval_u(s.combination(), a);
  r.max_end = std::max(eval_u(s.p1, a), eval_u(s.p2, a));
  r.margin = r.value - r.max_end;
  r.threshold = tol * (1.0 + std::abs(r.max_end));
  r.pass = r.margin <= r.threshold;
  return r;
}

MuWeights mu_decompose(const PointE& p1, const PointE& p2, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("mixing weight must lie in [0, 1]");
  }
  if (lambda == 1.0) return {1.0, 0.0};
  if (lambda == 0.0) return {0.0, 1.0};
  const double w1 = lambda * p1.z();
  const double w2 = (1.0 - lambda) * p2.z();
  const double mu1 = w1 / (w1 + w2);
  return {mu1, 1.0 - mu1};
}

MuIdentity mu_identity_check(const PointE& p1, const PointE& p2,
                             double lambda, Alpha a) {
  const SegmentSample s(p1, p2, lambda);
  const MuWeights mu = mu_decompose(p1, p2, lambda);
  MuIdentity r;
  r.u_combination = eval_u(s.combination(), a);
  const double sx = mu.mu1 * p1.x() / p1.z() + mu.mu2 * p2.x() / p2.z();
  const double sy = mu.mu1 * p1.y() / p1.z() + mu.mu2 * p2.y() / p2.z();
  r.v_mixture = eval_v(sx, sy, a);
  r.residual = std::abs(r.u_combination - r.v_mixture);
  r.relative = r.residual / std::abs(r.u_combination);
  return r;
}

ChainInequality chain_inequality(const SegmentSample& s, Alpha a, double tol) {
  const MuWeights mu = mu_decompose(s.p1, s.p2, s.lambda);
  const double u1 = eval_u(s.p1, a);
  const double u2 = eval_u(s.p2, a);
  ChainInequality r;
  r.u_combination = eval_u(s.combination(), a);
  r.mu_average = mu.mu1 * u1 + mu.mu2 * u2;
  r.max_end = std::max(u1, u2);
  const double slack = tol * (1.0 + std::abs(r.max_end));
  r.pass = r.u_combination <= r.mu_average + slack &&
           r.mu_average <= r.max_end + slack;
  return r;
}

VConvexity v_convexity_check(std::span<const std::pair<double, double>> grid,
                             Alpha a) {
  constexpr double kMidpointTol = 1e-12;
  VConvexity r{true, 1e300, -1e300, 0, 0};
  for (const auto& [s, t] : grid) {
    const Diag2 h = hess_v(s, t, a);
    r.min_hessian_diagonal = std::min({r.min_hessian_diagonal, h.ss, h.tt});
    if (!(h.ss >= 0.0 && h.tt >= 0.0)) r.pass = false;
    ++r.hessian_points;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const auto [s1, t1] = grid[i];
      const auto [s2, t2] = grid[j];
      const double mid = eval_v(0.5 * (s1 + s2), 0.5 * (t1 + t2), a);
      const double avg = 0.5 * (eval_v(s1, t1, a) + eval_v(s2, t2, a));
      const double rel = (mid - avg) / avg;
      r.worst_midpoint_margin = std::max(r.worst_midpoint_margin, rel);
      if (rel > kMidpointTol) r.pass = false;
      ++r.midpoint_pairs;
    }
  }
  return r;
}

namespace {

struct SampleOutcome {
  double margin_ratio;
  double mu_relative;
  bool segment_ok;
  bool chain_ok;
};

}  // namespace

QuasiconvexityBatch run_quasiconvexity_batch(
    std::span<const SegmentSample> samples, std::span<const double> alphas,
    double tol, double mu_tol, unsigned threads) {
  if (alphas.size() != samples.size()) {
    throw DomainError("one alpha per segment sample is required");
  }
  std::vector<SampleOutcome> out(samples.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Alpha a(alphas[i]);
      const SegmentSample& s = samples[i];
      const SegmentResult seg = segment_test(s, a, tol);
      const ChainInequality chain = chain_inequality(s, a, tol);
      const MuIdentity mu = mu_identity_check(s.p1, s.p2, s.lambda, a);
      out[i] = {seg.margin / (1.0 + std::abs(seg.max_end)), mu.relative,
                seg.pass, chain.pass};
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1 || samples.size() < 2 * threads) {
    work(0, samples.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (samples.size() + threads - 1) / threads;
    for (std::size_t b = 0; b < samples.size(); b += chunk) {
      pool.emplace_back(work, b, std::min(samples.size(), b + chunk));
    }
  }

  QuasiconvexityBatch r;
  r.samples = samples.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const SampleOutcome& o = out[i];
    const bool mu_ok = o.mu_relative <= mu_tol;
    if (!o.segment_ok) ++r.violations;
    if (!o.chain_ok) ++r.chain_violations;
    if (!mu_ok) ++r.mu_violations;
    if (!o.segment_ok || !o.chain_ok || !mu_ok) r.failing_indices.push_back(i);
    if (o.margin_ratio > r.worst_margin_ratio) {
      r.worst_margin_ratio = o.margin_ratio;
      r.worst_index = i;
    }
    if (o.mu_relative > r.worst_mu_relative) {
      r.worst_mu_relative = o.mu_relative;
      r.worst_mu_index = i;
    }
  }
  return r;
}

}  // namespace qcx
