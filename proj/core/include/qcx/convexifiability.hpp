#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "qcx/monotone.hpp"
#include "qcx/types.hpp"

namespace qcx {

/// Direction xi with <Du(base), xi> = 0.
struct TangentDirection {
  Vec3 xi;
  PointE base;
  Alpha alpha;

  /// |<Du, xi>| / (|Du| |xi|), or 0 for the zero direction.
  double constraint_residual() const;
  bool satisfies_constraint(double tol = 1e-10) const {
    return constraint_residual() <= tol;
  }
};

/// Completes (xi1, xi2) to a tangent direction by solving <Du, xi> = 0 for
/// xi3 = z x^a y^a / (x^a + y^a) * (xi1 / x^(a+1) + xi2 / y^(a+1)).
TangentDirection lift_tangent(double xi1, double xi2, const PointE& p, Alpha a);

/// <xi, D^2u xi>. On the tangent space this is F'(u)^-1 <xi, D^2{F[u]} xi>
/// for every F, since the F'' Du Du^T term vanishes there.
double curvature_on_tangent(const TangentDirection& t);

/// <xi, D^2{F[u]} xi> with the full chain-rule Hessian, for checking the
/// F-independence above.
double composed_curvature_on_tangent(const MonotoneF& f,
                                     const TangentDirection& t);

/// 2x2 symmetric matrix of a quadratic form in (xi1, xi2).
struct ReducedForm {
  double q11 = 0, q22 = 0, q12 = 0;

  double value(double xi1, double xi2) const {
    return q11 * xi1 * xi1 + q22 * xi2 * xi2 + 2.0 * q12 * xi1 * xi2;
  }
  double det() const { return q11 * q22 - q12 * q12; }
};

/// Q(xi1, xi2) with the bracket coefficients
///   q11 = x^-(a+2) [a(a+1) - (a^2+1) y^a / (x^a + y^a)],
///   q22 = y^-(a+2) [a(a+1) - (a^2+1) x^a / (x^a + y^a)],
///   q12 = -(a^2+1) x^a y^a / (x^a + y^a) x^-(a+1) y^-(a+1).
/// det * x^(a+2) y^(a+2) = a(a+1)(a-1) identically.
///
/// Note: the factor (a^2+1) does not follow from D^2u. Eliminating xi3
/// gives a(a+1) in its place, see tangent_restriction(). The two agree
/// only at a = 1; in general
///   z^a Q(xi1, xi2) - <xi, D^2u xi> = (a - 1) z^a W S^2,
/// W = x^a y^a / (x^a + y^a), S = xi1 / x^(a+1) + xi2 / y^(a+1).
ReducedForm reduced_form(const PointE& p, Alpha a);

/// Exact restriction: z^a * tangent_restriction(p, a).value(xi1, xi2)
/// equals curvature_on_tangent(lift_tangent(xi1, xi2, p, a)). Positive
/// semidefinite of rank one for every a > 0; its null direction (x, y)
/// lifts to the radial direction p.
ReducedForm tangent_restriction(const PointE& p, Alpha a);

/// a(a+1)(a-1).
double determinant_R(Alpha a);

/// Base for all failures of the obstruction searches. what() carries the
/// diagnostics needed to reproduce.
class ObstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IndefinitenessCertificate {
  PointE point;
  Alpha alpha;
  TangentDirection xi_plus;
  TangentDirection xi_minus;
  double value_plus;   // z^a Q at the lifted reduced-form eigenvector
  double value_minus;
  double tolerance;    // 1e-10 * |D^2u|_F * max |xi|^2
  double recomputed_plus;   // <xi, D^2u xi>, evaluated independently
  double recomputed_minus;
  double residual_plus;     // |value - recomputed| / max(|value|, |recomputed|)
  double residual_minus;
};

struct CertificateAttempt {
  IndefinitenessCertificate candidate;
  ReducedForm form;
  std::array<double, 2> form_eigenvalues;
  bool valid = false;
  /// "ok", "near_alpha_one", "degenerate", "sign" or "mismatch".
  std::string reason;
  std::string detail;
};

inline constexpr double kCertificateRelTol = 1e-10;
inline constexpr double kRecomputeRelTol = 1e-8;
inline constexpr double kNearAlphaOne = 1e-3;

/// Builds witnesses from the eigenvectors of reduced_form(p, a), lifts them
/// with lift_tangent, and checks them against <xi, D^2u xi> recomputed from
/// hess_u. Requires 0 < a < 1. Never throws for a bad candidate; the
/// outcome is reported in `valid` / `reason`.
CertificateAttempt attempt_certificate(const PointE& p, Alpha a,
                                       double rel_tol = kCertificateRelTol);

class CertificateError : public ObstructionError {
 public:
  explicit CertificateError(CertificateAttempt attempt);
  const CertificateAttempt& attempt() const noexcept { return attempt_; }

 private:
  CertificateAttempt attempt_;
};

/// attempt_certificate, throwing CertificateError unless the candidate
/// passes every certificate invariant.
IndefinitenessCertificate find_certificate(const PointE& p, Alpha a,
                                           double rel_tol = kCertificateRelTol);

/// One (t, kappa) probe of
///   G = <xi, D^2u xi> + 2 kappa <D^2u xi, Du>
///       + [F''/F' |Du|^4 + <D^2u Du, Du>] kappa^2,
/// with xi = t (x0, y0, z0), i.e. eta = xi + kappa Du.
struct SignFlipWitness {
  double t = 0;
  double kappa = 0;
  double value = 0;
  double scale = 0;  // sum of |terms| of G; the sign is certified if
                     // |value| >= rel_tol * scale
};

struct SignFlipResult {
  PointE point;
  Alpha alpha;
  std::string f_label;
  double c_per_t;          // <D^2u p, Du>
  double c_closed_form;    // -z^2/x^4 - z^2/y^4 - (1/x + 1/y)^2 (a = 1 only)
  double c_relative_error; // |c_per_t - c_closed_form| / |c_closed_form|
  double curvature_ratio;  // F''/F' at u(p)
  double kappa_sq_coeff;   // F''/F' |Du|^4 + <D^2u Du, Du>
  SignFlipWitness plus;
  SignFlipWitness minus;
};

/// G(t, kappa) as above, evaluated term by term.
SignFlipWitness sign_flip_expression(const PointE& p, Alpha a,
                                     const MonotoneF& f, double t,
                                     double kappa);

inline constexpr double kSignFlipRelTol = 1e-6;

/// Sweeps kappa in {+1, -1} and t in +-2^k, k = 0..40, returning the first
/// probes of each sign with |G| >= rel_tol * scale. Works for every a > 0:
/// xi = t p is tangent with <xi, D^2u xi> = 0 and <D^2u p, Du> = -|Du|^2.
/// Throws ObstructionError if F'(u) = 0, |c| is below tolerance, or the
/// sweep does not find both signs.
SignFlipResult radial_sign_flip(const PointE& p, Alpha a, const MonotoneF& f,
                                double rel_tol = kSignFlipRelTol);

/// radial_sign_flip at a = 1, where <D^2u xi, Du> has the closed form
/// t (-z^2/x^4 - z^2/y^4 - (1/x + 1/y)^2). c_relative_error reports the
/// agreement.
SignFlipResult alpha_one_sign_flip(const PointE& p, const MonotoneF& f,
                                   double rel_tol = kSignFlipRelTol);

struct IndefinitenessCheck {
  std::array<double, 3> eigenvalues;  // of D^2u + (F''/F') Du Du^T, ascending
  std::array<Vec3, 3> eigenvectors;
  double tolerance;                   // tol_rel * Frobenius norm
  bool pass;                          // min <= -tol and max >= +tol
  std::string f_label;
};

inline constexpr double kEigenRelTol = 1e-12;

/// Inertia test of D^2{F[u]} / F'(u) without a restriction on a.
IndefinitenessCheck composed_hessian_inertia(const PointE& p, Alpha a,
                                             const MonotoneF& f,
                                             double tol_rel = kEigenRelTol);

/// composed_hessian_inertia restricted to 0 < a <= 1 (DomainError
/// otherwise). Throws DomainError if F'(u(p)) = 0.
IndefinitenessCheck composed_hessian_indefinite(const PointE& p, Alpha a,
                                                const MonotoneF& f,
                                                double tol_rel = kEigenRelTol);

}  // namespace qcx
