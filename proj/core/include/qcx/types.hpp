#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qcx {

/// Raised when an argument lies outside the open positive octant, or a
/// parameter violates its declared range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an intermediate power or exponential is not representable.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Exponent of the function family. Always strictly positive.
class Alpha {
 public:
  explicit Alpha(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DomainError("alpha must be a finite positive number, got " +
                        std::to_string(value));
    }
  }
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// Point of E = {(x, y, z) : x, y, z > 0}.
class PointE {
 public:
  PointE(double x, double y, double z) : c_{x, y, z} {
    for (double v : c_) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("point (" + std::to_string(x) + ", " +
                          std::to_string(y) + ", " + std::to_string(z) +
                          ") is not in the open positive octant");
      }
    }
  }
  double x() const noexcept { return c_[0]; }
  double y() const noexcept { return c_[1]; }
  double z() const noexcept { return c_[2]; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  const std::array<double, 3>& coords() const noexcept { return c_; }

  PointE scaled(double s) const { return {s * c_[0], s * c_[1], s * c_[2]}; }

  friend bool operator==(const PointE&, const PointE&) = default;

 private:
  std::array<double, 3> c_;
};

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  Vec3() = default;
  Vec3(double a, double b, double c) : v{a, b, c} {}
  explicit Vec3(const PointE& p) : v(p.coords()) {}

  double& operator[](std::size_t i) noexcept { return v[i]; }
  double operator[](std::size_t i) const noexcept { return v[i]; }

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Symmetric 3x3 matrix stored as its upper triangle.
struct Sym3 {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  double operator()(int i, int j) const noexcept {
    if (i > j) std::swap(i, j);
    switch (i * 3 + j) {
      case 0: return xx;
      case 1: return xy;
      case 2: return xz;
      case 4: return yy;
      case 5: return yz;
      default: return zz;
    }
  }

  Vec3 apply(const Vec3& a) const {
    return {xx * a[0] + xy * a[1] + xz * a[2],
            xy * a[0] + yy * a[1] + yz * a[2],
            xz * a[0] + yz * a[1] + zz * a[2]};
  }
  double quadratic(const Vec3& a) const { return dot(a, apply(a)); }

  double frobenius() const {
    return std::sqrt(xx * xx + yy * yy + zz * zz +
                     2.0 * (xy * xy + xz * xz + yz * yz));
  }

  friend bool operator==(const Sym3&, const Sym3&) = default;
};

inline Sym3 operator+(const Sym3& a, const Sym3& b) {
  return {a.xx + b.xx, a.yy + b.yy, a.zz + b.zz,
          a.xy + b.xy, a.xz + b.xz, a.yz + b.yz};
}
inline Sym3 operator-(const Sym3& a, const Sym3& b) {
  return {a.xx - b.xx, a.yy - b.yy, a.zz - b.zz,
          a.xy - b.xy, a.xz - b.xz, a.yz - b.yz};
}
inline Sym3 operator*(double s, const Sym3& a) {
  return {s * a.xx, s * a.yy, s * a.zz, s * a.xy, s * a.xz, s * a.yz};
}
inline Sym3 outer(const Vec3& a) {
  return {a[0] * a[0], a[1] * a[1], a[2] * a[2],
          a[0] * a[1], a[0] * a[2], a[1] * a[2]};
}

}  // namespace qcx
