#include "qcx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcx {

namespace {

// 1 - |r| below this means two eigenvalues are close enough that acos(r)
// amplifies rounding in r by 1/sqrt(1 - r^2).
constexpr double kTrigGuard = 1e-6;

}  // namespace

std::array<double, 3> eigenvalues(const Sym3& m) {
  const double off = m.xy * m.xy + m.xz * m.xz + m.yz * m.yz;
  const double q = (m.xx + m.yy + m.zz) / 3.0;
  const double dx = m.xx - q, dy = m.yy - q, dz = m.zz - q;
  const double p2 = dx * dx + dy * dy + dz * dz + 2.0 * off;
  const double scale = m.frobenius();
  if (scale == 0.0) return {0.0, 0.0, 0.0};
  if (p2 <= 1e-24 * scale * scale) return {q, q, q};

  const double p = std::sqrt(p2 / 6.0);
  const double bxx = dx / p, byy = dy / p, bzz = dz / p;
  const double bxy = m.xy / p, bxz = m.xz / p, byz = m.yz / p;
  const double det_b = bxx * (byy * bzz - byz * byz) -
                       bxy * (bxy * bzz - byz * bxz) +
                       bxz * (bxy * byz - byy * bxz);
  const double r = det_b / 2.0;
  if (1.0 - std::abs(r) < kTrigGuard) return jacobi_eigen(m).values;

  const double phi = std::acos(std::clamp(r, -1.0, 1.0)) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double mid = 3.0 * q - hi - lo;
  std::array<double, 3> out{lo, mid, hi};
  std::sort(out.begin(), out.end());
  return out;
}

Eigen3 jacobi_eigen(const Sym3& m) {
  double a[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    const double diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
    if (off == 0.0 || off <= 1e-36 * diag) break;
    for (int pi = 0; pi < 2; ++pi) {
      for (int qi = pi + 1; qi < 3; ++qi) {
        const double apq = a[pi][qi];
        if (apq == 0.0) continue;
        const double theta = (a[qi][qi] - a[pi][pi]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][pi], akq = a[k][qi];
          a[k][pi] = c * akp - s * akq;
          a[k][qi] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[pi][k], aqk = a[qi][k];
          a[pi][k] = c * apk - s * aqk;
          a[qi][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][pi], vkq = v[k][qi];
          v[k][pi] = c * vkp - s * vkq;
          v[k][qi] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a[i][i] < a[j][j]; });
  Eigen3 out;
  for (int k = 0; k < 3; ++k) {
    const int c = order[k];
    out.values[k] = a[c][c];
    out.vectors[k] = Vec3{v[0][c], v[1][c], v[2][c]};
  }
  return out;
}

Eigen2 eigen(const Sym2& m) {
  const double half_tr = 0.5 * (m.a + m.c);
  const double half_diff = 0.5 * (m.a - m.c);
  const double rad = std::hypot(half_diff, m.b);
  Eigen2 out;
  // Larger-magnitude root first, the other from det / root to avoid
  // cancellation.
  double big = half_tr >= 0.0 ? half_tr + rad : half_tr - rad;
  double small = big != 0.0 ? m.det() / big : 0.0;
  out.values = {std::min(big, small), std::max(big, small)};

  for (int k = 0; k < 2; ++k) {
    const double lam = out.values[k];
    // Rows of (M - lam I); pick the better-conditioned null vector.
    double v0 = m.b, v1 = lam - m.a;
    double w0 = lam - m.c, w1 = m.b;
    if (std::hypot(w0, w1) > std::hypot(v0, v1)) {
      v0 = w0;
      v1 = w1;
    }
    double n = std::hypot(v0, v1);
    if (n == 0.0) {
      // M is a multiple of the identity.
      v0 = k == 0 ? 1.0 : 0.0;
      v1 = k == 0 ? 0.0 : 1.0;
      n = 1.0;
    }
    out.vectors[k] = {v0 / n, v1 / n};
  }
  return out;
}

}  // namespace qcx
