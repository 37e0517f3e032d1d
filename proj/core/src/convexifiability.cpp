#include "qcx/convexifiability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcx/compose.hpp"
#include "qcx/field.hpp"
#include "qcx/linalg.hpp"

namespace qcx {

double TangentDirection::constraint_residual() const {
  const Vec3 g = grad_u(base, alpha);
  const double scale = norm(g) * norm(xi);
  if (scale == 0.0) return 0.0;
  return std::abs(dot(g, xi)) / scale;
}

TangentDirection lift_tangent(double xi1, double xi2, const PointE& p,
                              Alpha a) {
  const double al = a;
  // x^a y^a / (x^a + y^a) = 1 / (x^-a + y^-a)
  const double x_ma = positive_pow(p.x(), -al);
  const double y_ma = positive_pow(p.y(), -al);
  const double weight = p.z() / (x_ma + y_ma);
  const double xi3 = weight * (xi1 * x_ma / p.x() + xi2 * y_ma / p.y());
  return {Vec3{xi1, xi2, xi3}, p, a};
}

double curvature_on_tangent(const TangentDirection& t) {
  return hess_u(t.base, t.alpha).quadratic(t.xi);
}

double composed_curvature_on_tangent(const MonotoneF& f,
                                     const TangentDirection& t) {
  return compose_hessian(f, t.base, t.alpha).quadratic(t.xi);
}

namespace {

// Shared body of the bracket and the exact reduced forms; they differ
// only in the factor multiplying the eliminated xi3 contribution.
ReducedForm reduced_form_with(const PointE& p, Alpha a, double factor) {
  const double al = a;
  const double x = p.x(), y = p.y();
  // share_y = y^a / (x^a + y^a), computed from the ratio to avoid overflow.
  const double share_y = 1.0 / (1.0 + positive_pow(x / y, al));
  const double share_x = 1.0 - share_y;
  const double k = al * (al + 1.0);
  const double x_sum = positive_pow(x, al) + positive_pow(y, al);
  ReducedForm q;
  q.q11 = positive_pow(x, -al - 2.0) * (k - factor * share_y);
  q.q22 = positive_pow(y, -al - 2.0) * (k - factor * share_x);
  // x^a y^a / (x^a + y^a) * x^-(a+1) y^-(a+1) = 1 / ((x^a + y^a) x y)
  q.q12 = -factor / (x_sum * x * y);
  return q;
}

}  // namespace

ReducedForm reduced_form(const PointE& p, Alpha a) {
  const double al = a;
  return reduced_form_with(p, a, al * al + 1.0);
}

ReducedForm tangent_restriction(const PointE& p, Alpha a) {
  const double al = a;
  return reduced_form_with(p, a, al * (al + 1.0));
}

double determinant_R(Alpha a) {
  const double al = a;
  return al * (al + 1.0) * (al - 1.0);
}

namespace {

std::array<double, 2> normalized_witness(const std::array<double, 2>& v) {
  const double m = std::max(std::abs(v[0]), std::abs(v[1]));
  double s = 1.0 / m;
  if ((v[0] != 0.0 ? v[0] : v[1]) < 0.0) s = -s;
  return {v[0] * s, v[1] * s};
}

double relative_gap(double a, double b) {
  const double m = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / m;
}

std::string describe(const CertificateAttempt& at) {
  const auto& c = at.candidate;
  std::ostringstream os;
  os.precision(17);
  os << "certificate rejected (" << at.reason << ") at point (" << c.point.x()
     << ", " << c.point.y() << ", " << c.point.z() << "), alpha "
     << c.alpha.value() << ": " << at.detail;
  return os.str();
}

}  // namespace

CertificateAttempt attempt_certificate(const PointE& p, Alpha a,
                                       double rel_tol) {
  const double al = a;
  if (!(al < 1.0)) {
    throw DomainError("find_certificate requires 0 < alpha < 1; use "
                      "alpha_one_sign_flip at alpha = 1");
  }
  const ReducedForm form = reduced_form(p, a);
  const Eigen2 eig = eigen(Sym2{form.q11, form.q12, form.q22});

  const auto neg = normalized_witness(eig.vectors[0]);
  const auto pos = normalized_witness(eig.vectors[1]);
  const TangentDirection xi_minus = lift_tangent(neg[0], neg[1], p, a);
  const TangentDirection xi_plus = lift_tangent(pos[0], pos[1], p, a);

  const double za = positive_pow(p.z(), al);
  const Sym3 h = hess_u(p, a);
  const double xi_sq = std::max(dot(xi_plus.xi, xi_plus.xi),
                                dot(xi_minus.xi, xi_minus.xi));

  IndefinitenessCertificate c{
      p,
      a,
      xi_plus,
      xi_minus,
      za * form.value(pos[0], pos[1]),
      za * form.value(neg[0], neg[1]),
      rel_tol * h.frobenius() * xi_sq,
      curvature_on_tangent(xi_plus),
      curvature_on_tangent(xi_minus),
      0.0,
      0.0};
  c.residual_plus = relative_gap(c.value_plus, c.recomputed_plus);
  c.residual_minus = relative_gap(c.value_minus, c.recomputed_minus);

  CertificateAttempt at{c, form, eig.values, false, "ok", ""};
  std::ostringstream os;
  os.precision(17);

  const double form_scale = std::abs(form.q11) + std::abs(form.q22) +
                            2.0 * std::abs(form.q12);
  if (1.0 - al < kNearAlphaOne) {
    at.reason = "near_alpha_one";
    os << "|1 - alpha| < " << kNearAlphaOne
       << "; route to the alpha = 1 analysis";
  } else if (std::abs(form.det()) <= 1e-12 * form_scale * form_scale) {
    at.reason = "degenerate";
    os << "det Q = " << form.det();
  } else if (!(c.value_plus >= c.tolerance && c.value_minus <= -c.tolerance &&
               c.recomputed_plus >= c.tolerance &&
               c.recomputed_minus <= -c.tolerance)) {
    at.reason = "sign";
    os << "predicted (z^a Q) values +" << c.value_plus << " / "
       << c.value_minus << ", recomputed <xi, D^2u xi> " << c.recomputed_plus
       << " / " << c.recomputed_minus << ", tolerance " << c.tolerance;
  } else if (c.residual_plus > kRecomputeRelTol ||
             c.residual_minus > kRecomputeRelTol) {
    at.reason = "mismatch";
    os << "relative residuals " << c.residual_plus << " / "
       << c.residual_minus;
  } else {
    at.valid = true;
  }
  at.detail = os.str();
  return at;
}

CertificateError::CertificateError(CertificateAttempt attempt)
    : ObstructionError(describe(attempt)), attempt_(std::move(attempt)) {}

IndefinitenessCertificate find_certificate(const PointE& p, Alpha a,
                                           double rel_tol) {
  CertificateAttempt at = attempt_certificate(p, a, rel_tol);
  if (!at.valid) throw CertificateError(std::move(at));
  return at.candidate;
}

SignFlipWitness sign_flip_expression(const PointE& p, Alpha a,
                                     const MonotoneF& f, double t,
                                     double kappa) {
  const double u = eval_u(p, a);
  if (!f.strictly_monotone_at(u)) {
    throw ObstructionError("F'(u) = 0 at u = " + std::to_string(u) +
                           " for F = " + f.label());
  }
  const Sym3 h = hess_u(p, a);
  const Vec3 g = grad_u(p, a);
  const TangentDirection xi = lift_tangent(t * p.x(), t * p.y(), p, a);
  const Vec3 h_xi = h.apply(xi.xi);
  const double g_sq = dot(g, g);
  const double ratio = f.curvature_ratio(u);

  const double t1 = dot(xi.xi, h_xi);
  const double t2 = 2.0 * kappa * dot(h_xi, g);
  const double t3a = ratio * g_sq * g_sq * kappa * kappa;
  const double t3b = h.quadratic(g) * kappa * kappa;
  return {t, kappa, t1 + t2 + t3a + t3b,
          std::abs(t1) + std::abs(t2) + std::abs(t3a) + std::abs(t3b)};
}

SignFlipResult radial_sign_flip(const PointE& p, Alpha a, const MonotoneF& f,
                                double rel_tol) {
  const double u = eval_u(p, a);
  if (!f.strictly_monotone_at(u)) {
    throw ObstructionError("F'(u) = 0 at u = " + std::to_string(u) +
                           " for F = " + f.label());
  }
  const Sym3 h = hess_u(p, a);
  const Vec3 g = grad_u(p, a);
  const Vec3 radial = lift_tangent(p.x(), p.y(), p, a).xi;
  const double c = dot(h.apply(radial), g);
  const double g_sq = dot(g, g);
  const double ratio = f.curvature_ratio(u);

  SignFlipResult r{p,
                   a,
                   f.label(),
                   c,
                   -g_sq,
                   0.0,
                   ratio,
                   ratio * g_sq * g_sq + h.quadratic(g),
                   {},
                   {}};
  r.c_relative_error = std::abs(r.c_per_t - r.c_closed_form) /
                       std::abs(r.c_closed_form);

  if (std::abs(c) < 1e-10 * h.frobenius() * norm(radial) * std::sqrt(g_sq)) {
    std::ostringstream os;
    os.precision(17);
    os << "linear coefficient <D^2u xi, Du> = " << c << " vanishes at ("
       << p.x() << ", " << p.y() << ", " << p.z() << "), alpha " << a.value();
    throw ObstructionError(os.str());
  }

  bool have_plus = false, have_minus = false;
  for (int k = 0; k <= 40 && !(have_plus && have_minus); ++k) {
    const double mag = std::ldexp(1.0, k);
    for (double kappa : {1.0, -1.0}) {
      for (double sgn : {1.0, -1.0}) {
        const SignFlipWitness w = sign_flip_expression(p, a, f, sgn * mag, kappa);
        if (std::abs(w.value) < rel_tol * w.scale) continue;
        if (w.value > 0.0 && !have_plus) {
          r.plus = w;
          have_plus = true;
        } else if (w.value < 0.0 && !have_minus) {
          r.minus = w;
          have_minus = true;
        }
      }
    }
  }
  if (!(have_plus && have_minus)) {
    std::ostringstream os;
    os.precision(17);
    os << "sweep found " << (have_plus ? "" : "no positive ")
       << (have_minus ? "" : "no negative ") << "value of G at (" << p.x()
       << ", " << p.y() << ", " << p.z() << "), alpha " << a.value()
       << ", F = " << f.label();
    throw ObstructionError(os.str());
  }
  return r;
}

SignFlipResult alpha_one_sign_flip(const PointE& p, const MonotoneF& f,
                                   double rel_tol) {
  SignFlipResult r = radial_sign_flip(p, Alpha(1.0), f, rel_tol);
  const double x = p.x(), y = p.y(), z = p.z();
  const double inv = 1.0 / x + 1.0 / y;
  r.c_closed_form = -z * z / (x * x * x * x) - z * z / (y * y * y * y) - inv * inv;
  r.c_relative_error = std::abs(r.c_per_t - r.c_closed_form) /
                       std::abs(r.c_closed_form);
  return r;
}

IndefinitenessCheck composed_hessian_inertia(const PointE& p, Alpha a,
                                             const MonotoneF& f,
                                             double tol_rel) {
  const Sym3 m = normalized_composed_hessian(f, p, a);
  IndefinitenessCheck r;
  r.eigenvalues = eigenvalues(m);
  r.eigenvectors = jacobi_eigen(m).vectors;
  r.tolerance = tol_rel * m.frobenius();
  r.pass = r.eigenvalues[0] <= -r.tolerance && r.eigenvalues[2] >= r.tolerance;
  r.f_label = f.label();
  return r;
}

IndefinitenessCheck composed_hessian_indefinite(const PointE& p, Alpha a,
                                                const MonotoneF& f,
                                                double tol_rel) {
  if (!(a.value() <= 1.0)) {
    throw DomainError("composed_hessian_indefinite covers 0 < alpha <= 1");
  }
  return composed_hessian_inertia(p, a, f, tol_rel);
}

}  // namespace qcx
