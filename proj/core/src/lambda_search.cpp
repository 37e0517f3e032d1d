#include "qcx/lambda_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qcx/field.hpp"
#include "qcx/linalg.hpp"

namespace qcx {

ConvexificationMatrix convexification_matrix(const PointE& p, Alpha a,
                                             double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be finite and nonnegative");
  }
  const Vec3 g = grad_u(p, a);
  const double log_pre = lambda > 0.0
                             ? std::log(lambda) + lambda * eval_u(p, a)
                             : -std::numeric_limits<double>::infinity();
  return {hess_u(p, a) + lambda * outer(g), log_pre};
}

double convexification_min_eigenvalue(const PointE& p, Alpha a,
                                      double lambda) {
  return eigenvalues(convexification_matrix(p, a, lambda).matrix)[0];
}

bool is_psd(const Sym3& m, double rel_tol) {
  return eigenvalues(m)[0] >= -rel_tol * m.frobenius();
}

namespace {

std::string describe(const NotConvexifiable::Diagnostics& d) {
  std::ostringstream os;
  os.precision(17);
  os << "not convexifiable (" << d.reason << ") at (" << d.point[0] << ", "
     << d.point[1] << ", " << d.point[2] << "), alpha " << d.alpha
     << ": lambda " << d.lambda_reached << ", min eigenvalue "
     << d.min_eigenvalue << ", |M|_F " << d.frobenius;
  if (d.reason == "strict") {
    os << ", tolerance-level threshold " << d.tolerance_threshold;
  }
  return os.str();
}

}  // namespace

NotConvexifiable::NotConvexifiable(Diagnostics d)
    : ObstructionError(describe(d)), diag_(std::move(d)) {}

LambdaResult min_convexifying_lambda(const PointE& p, Alpha a,
                                     const LambdaSearchOptions& options) {
  if (!(a.value() > 1.0) && !options.bypass_alpha_guard) {
    throw DomainError("min_convexifying_lambda requires alpha > 1");
  }
  auto psd_at = [&](double lambda) {
    return is_psd(convexification_matrix(p, a, lambda).matrix);
  };
  auto fail = [&](std::string reason, double lambda, double threshold) {
    const Sym3 m = convexification_matrix(p, a, lambda).matrix;
    throw NotConvexifiable({a.value(), p.coords(), std::move(reason), lambda,
                            eigenvalues(m)[0], m.frobenius(), threshold});
  };

  double lo = 0.0;
  double hi = 0.0;
  if (!psd_at(0.0)) {
    hi = 1.0;
    while (!psd_at(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > options.lambda_cap) fail("cap", lo, 0.0);
    }
    while (hi - lo > options.rel_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      (psd_at(mid) ? hi : lo) = mid;
    }
  }

  const double check = hi > 0.0 ? 1.01 * hi : 0.0;
  const double margin = convexification_min_eigenvalue(p, a, check);
  if (!(margin > 0.0)) fail("strict", check, hi);

  return {p, a, hi, margin, 0.0, hi > 0.0 ? (hi - lo) / hi : 0.0};
}

NeighborhoodReport neighborhood_check(const LambdaResult& r, double radius,
                                      std::size_t samples,
                                      std::uint64_t seed) {
  constexpr std::array<double, 4> kLadder{0.005, 0.01, 0.02, 0.05};
  const double lambda = 1.01 * r.lambda_min;
  NeighborhoodReport out{0.0, true, 0.0, r.point.coords()};
  if (radius <= 0.0) return out;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  bool all_passed_so_far = true;
  for (double rad : kLadder) {
    if (rad > radius * (1.0 + 1e-12)) break;
    bool ok = true;
    for (std::size_t i = 0; i < samples; ++i) {
      const PointE q(r.point.x() * (1.0 + rad * unit(rng)),
                     r.point.y() * (1.0 + rad * unit(rng)),
                     r.point.z() * (1.0 + rad * unit(rng)));
      const Sym3 m = convexification_matrix(q, r.alpha, lambda).matrix;
      const double rel = eigenvalues(m)[0] / m.frobenius();
      if (rel < out.worst_min_eigenvalue) {
        out.worst_min_eigenvalue = rel;
        out.worst_point = q.coords();
      }
      if (rel < -1e-10) ok = false;
    }
    if (ok && all_passed_so_far) out.largest_passing_radius = rad;
    all_passed_so_far = all_passed_so_far && ok;
  }
  out.requested_radius_passes =
      all_passed_so_far && out.largest_passing_radius > 0.0;
  return out;
}

}  // namespace qcx
