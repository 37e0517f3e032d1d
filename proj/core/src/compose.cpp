#include "qcx/compose.hpp"

#include <cmath>

#include "qcx/field.hpp"

namespace qcx {

Sym3 compose_hessian(const MonotoneF& f, const PointE& p, Alpha a) {
  const double u = eval_u(p, a);
  const double first = f.d1(u);
  const double second = f.d2(u);
  if (!std::isfinite(first) || !std::isfinite(second)) {
    throw OverflowError("F'(u) or F''(u) overflows for F = " + f.label());
  }
  return second * outer(grad_u(p, a)) + first * hess_u(p, a);
}

Sym3 normalized_composed_hessian(const MonotoneF& f, const PointE& p, Alpha a) {
  const double u = eval_u(p, a);
  if (!f.strictly_monotone_at(u)) {
    throw DomainError("F'(u) vanishes at u = " + std::to_string(u) +
                      " for F = " + f.label());
  }
  const double ratio = f.curvature_ratio(u);
  return hess_u(p, a) + ratio * outer(grad_u(p, a));
}

}  // namespace qcx
