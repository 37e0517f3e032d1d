#pragma once

#include "qcx/monotone.hpp"
#include "qcx/types.hpp"

namespace qcx {

/// Chain-rule Hessian of F[u]: F''(u) Du Du^T + F'(u) D^2u, built from the
/// closed forms. Throws OverflowError if F'(u) or F''(u) is not finite.
Sym3 compose_hessian(const MonotoneF& f, const PointE& p, Alpha a);

/// D^2{F[u]} / F'(u) = D^2u + (F''/F')(u) Du Du^T. Same inertia as
/// compose_hessian up to the sign of F', and finite for exp(rate*t) at any u.
/// Throws DomainError if F'(u) = 0.
Sym3 normalized_composed_hessian(const MonotoneF& f, const PointE& p, Alpha a);

}  // namespace qcx
