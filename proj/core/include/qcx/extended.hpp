#pragma once

// Quad-precision evaluation of u, used only as the field behind the
// finite-difference oracle. Written straight from the defining quotient
// z^a (x^a + y^a) / (x^a y^a) and shares no code with eval_u.

#include <array>

extern "C" {
#include <quadmath.h>
}

namespace qcx::extended {

__extension__ typedef __float128 quad;

inline quad eval_u(const std::array<quad, 3>& p, double alpha) {
  const quad a = alpha;
  const quad xa = powq(p[0], a);
  const quad ya = powq(p[1], a);
  const quad za = powq(p[2], a);
  return za * (xa + ya) / (xa * ya);
}

/// Callable adaptor for fd_gradient / fd_hessian.
struct UField {
  double alpha;
  quad operator()(const std::array<quad, 3>& p) const {
    return eval_u(p, alpha);
  }
};

}  // namespace qcx::extended
