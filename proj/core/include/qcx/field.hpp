#pragma once

#include "qcx/types.hpp"

namespace qcx {

/// t^a computed as exp(a * ln t). Requires t > 0; throws OverflowError when
/// the result is not finite or underflows to zero.
double positive_pow(double t, double a);

/// u(x, y, z) = z^a (x^a + y^a) / (x^a y^a), the degree-0 homogeneous
/// quasi-convex function on E.
double eval_u(const PointE& p, Alpha a);

/// v(s, t) = s^-a + t^-a on (0, inf)^2. u(x, y, z) = v(x / z, y / z).
double eval_v(double s, double t, Alpha a);

/// Closed-form gradient of u. Components are (-, -, +) everywhere on E.
Vec3 grad_u(const PointE& p, Alpha a);

/// Closed-form Hessian of u. u_xy is identically zero; the sign of u_zz
/// is the sign of (a - 1). Satisfies hess_u(p) * p = -grad_u(p).
Sym3 hess_u(const PointE& p, Alpha a);

/// Diagonal Hessian of v at (s, t); the off-diagonal entry is zero.
struct Diag2 {
  double ss;
  double tt;
};
Diag2 hess_v(double s, double t, Alpha a);

}  // namespace qcx
