#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "qcx/convexifiability.hpp"
#include "qcx/types.hpp"

namespace qcx {

/// D^2{exp(lambda u)} = lambda e^(lambda u) (D^2u + lambda Du Du^T). The
/// positive prefactor is kept in log form so it never overflows.
struct ConvexificationMatrix {
  Sym3 matrix;        // D^2u + lambda Du Du^T
  double log_prefactor;  // ln(lambda) + lambda u; -inf at lambda = 0
};

ConvexificationMatrix convexification_matrix(const PointE& p, Alpha a,
                                             double lambda);

/// Smallest eigenvalue of D^2u + lambda Du Du^T.
double convexification_min_eigenvalue(const PointE& p, Alpha a, double lambda);

/// min eigenvalue >= -1e-12 * |M|_F.
bool is_psd(const Sym3& m, double rel_tol = 1e-12);

struct LambdaResult {
  PointE point;
  Alpha alpha;
  double lambda_min;
  double margin;               // min eigenvalue at 1.01 * lambda_min
  double neighborhood_radius;  // filled in by neighborhood_check, else 0
  double bracket_width;        // relative width of the final bisection bracket
};

struct LambdaSearchOptions {
  double rel_tol = 1e-6;
  double lambda_cap = 1e12;
  /// Allows alpha <= 1, for negative controls only.
  bool bypass_alpha_guard = false;
};

class NotConvexifiable : public ObstructionError {
 public:
  struct Diagnostics {
    double alpha;
    std::array<double, 3> point;
    /// "cap": no lambda up to the cap passed the tolerance PSD test.
    /// "strict": a tolerance-level threshold exists but the matrix is not
    /// strictly positive definite just above it.
    std::string reason;
    double lambda_reached;   // last lambda evaluated
    double min_eigenvalue;   // at lambda_reached (or 1.01 * threshold)
    double frobenius;        // |M|_F at the same lambda
    double tolerance_threshold;  // bisection result for "strict", else 0
  };

  explicit NotConvexifiable(Diagnostics d);
  const Diagnostics& diagnostics() const noexcept { return diag_; }

 private:
  Diagnostics diag_;
};

/// Smallest lambda with D^2u + lambda Du Du^T PSD at p: bracket by doubling
/// from lambda = 1 up to the cap, then bisect to the relative width
/// options.rel_tol. The result must be strictly positive definite at
/// 1.01 * lambda_min. Requires a > 1 unless the guard is bypassed.
LambdaResult min_convexifying_lambda(const PointE& p, Alpha a,
                                     const LambdaSearchOptions& options = {});

struct NeighborhoodReport {
  double largest_passing_radius;  // 0 when none of the tested radii passes
  bool requested_radius_passes;
  double worst_min_eigenvalue;    // over all sampled neighbours, relative
  std::array<double, 3> worst_point;
};

/// Samples points p (1 + r * d), d uniform in the unit cube's interior
/// scaled to |d|_inf <= 1, for each ladder radius {0.5%, 1%, 2%, 5%} not
/// exceeding `radius`, and requires D^2u + 1.01 lambda_min Du Du^T to stay
/// PSD (min eigenvalue >= -1e-10 |M|_F). radius 0 passes trivially.
NeighborhoodReport neighborhood_check(const LambdaResult& r, double radius,
                                      std::size_t samples,
                                      std::uint64_t seed = 0x5eed);

}  // namespace qcx
