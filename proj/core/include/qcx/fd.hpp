#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qcx/types.hpp"

namespace qcx {

/// Per-coordinate step h_i = max(rel * |p_i|, abs).
struct StepPolicy {
  double rel;
  double abs;

  static constexpr StepPolicy gradient() { return {1e-6, 1e-8}; }
  static constexpr StepPolicy hessian() { return {1e-4, 1e-8}; }

  double step(double coordinate) const {
    return std::max(rel * std::abs(coordinate), abs);
  }
};

/// Points with a coordinate below this are rejected before any stencil.
inline constexpr double kBoundaryGuard = 1e-8;

namespace detail {

inline std::array<double, 3> stencil_steps(const PointE& p, StepPolicy policy) {
  std::array<double, 3> h{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (p[i] < kBoundaryGuard) {
      throw DomainError("finite-difference base point too close to the "
                        "boundary of E (coordinate " + std::to_string(p[i]) +
                        ")");
    }
    h[i] = policy.step(p[i]);
    if (!(p[i] - h[i] > 0.0)) {
      throw DomainError("finite-difference stencil leaves E");
    }
  }
  return h;
}

}  // namespace detail

/// Central-difference gradient of a scalar field. The field is called with
/// std::array<Real, 3>; Real may be wider than double (the oracle uses
/// __float128) so that rounding stays far below the truncation error.
template <class Real = double, class Field>
Vec3 fd_gradient(Field&& f, const PointE& p,
                 StepPolicy policy = StepPolicy::gradient()) {
  const auto h = detail::stencil_steps(p, policy);
  std::array<Real, 3> base{Real(p.x()), Real(p.y()), Real(p.z())};
  Vec3 g;
  for (std::size_t i = 0; i < 3; ++i) {
    auto plus = base, minus = base;
    plus[i] += Real(h[i]);
    minus[i] -= Real(h[i]);
    g[i] = static_cast<double>((f(plus) - f(minus)) / (Real(2) * Real(h[i])));
  }
  return g;
}

/// Second-order central Hessian: three-point stencil on the diagonal and the
/// four-point cross stencil off it. The cross stencil is symmetric in (i, j),
/// so averaging the two orderings is a no-op and is skipped.
template <class Real = double, class Field>
Sym3 fd_hessian(Field&& f, const PointE& p,
                StepPolicy policy = StepPolicy::hessian()) {
  const auto h = detail::stencil_steps(p, policy);
  const std::array<Real, 3> base{Real(p.x()), Real(p.y()), Real(p.z())};
  const Real f0 = f(base);

  auto diag = [&](std::size_t i) {
    auto plus = base, minus = base;
    plus[i] += Real(h[i]);
    minus[i] -= Real(h[i]);
    return static_cast<double>((f(plus) - Real(2) * f0 + f(minus)) /
                               (Real(h[i]) * Real(h[i])));
  };
  auto cross = [&](std::size_t i, std::size_t j) {
    auto at = [&](int si, int sj) {
      auto q = base;
      q[i] += Real(si) * Real(h[i]);
      q[j] += Real(sj) * Real(h[j]);
      return f(q);
    };
    return static_cast<double>(((at(1, 1) - at(1, -1)) - (at(-1, 1) - at(-1, -1))) /
                               (Real(4) * Real(h[i]) * Real(h[j])));
  };

  Sym3 out;
  out.xx = diag(0);
  out.yy = diag(1);
  out.zz = diag(2);
  out.xy = cross(0, 1);
  out.xz = cross(0, 2);
  out.yz = cross(1, 2);
  return out;
}

}  // namespace qcx
