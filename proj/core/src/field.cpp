#include "qcx/field.hpp"

#include <cmath>
#include <string>

namespace qcx {

double positive_pow(double t, double a) {
  if (!(t > 0.0)) {
    throw DomainError("power base must be positive, got " + std::to_string(t));
  }
  const double r = std::exp(a * std::log(t));
  if (!std::isfinite(r) || (r == 0.0 && a != 0.0)) {
    throw OverflowError("power " + std::to_string(t) + "^" + std::to_string(a) +
                        " is not representable");
  }
  return r;
}

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw OverflowError(std::string(what) + " is not finite");
  }
}

}  // namespace

double eval_u(const PointE& p, Alpha a) {
  // z^a (x^a + y^a) / (x^a y^a) = z^a (x^-a + y^-a)
  const double za = positive_pow(p.z(), a);
  const double r = za * (positive_pow(p.x(), -a) + positive_pow(p.y(), -a));
  require_finite(r, "u");
  return r;
}

double eval_v(double s, double t, Alpha a) {
  if (!(s > 0.0) || !(t > 0.0)) {
    throw DomainError("v is defined on (0, inf)^2, got (" + std::to_string(s) +
                      ", " + std::to_string(t) + ")");
  }
  const double r = positive_pow(s, -a) + positive_pow(t, -a);
  require_finite(r, "v");
  return r;
}

Vec3 grad_u(const PointE& p, Alpha a) {
  const double al = a;
  const double za = positive_pow(p.z(), al);
  const double x_ma = positive_pow(p.x(), -al);
  const double y_ma = positive_pow(p.y(), -al);
  Vec3 g{-al * za * x_ma / p.x(),
         -al * za * y_ma / p.y(),
         al * za / p.z() * (x_ma + y_ma)};
  for (double c : g.v) require_finite(c, "grad u");
  return g;
}

Sym3 hess_u(const PointE& p, Alpha a) {
  const double al = a;
  const double x = p.x(), y = p.y(), z = p.z();
  const double za = positive_pow(z, al);
  const double x_ma = positive_pow(x, -al);
  const double y_ma = positive_pow(y, -al);
  Sym3 h;
  h.xx = al * (al + 1.0) * za * x_ma / (x * x);
  h.yy = al * (al + 1.0) * za * y_ma / (y * y);
  h.zz = al * (al - 1.0) * za / (z * z) * (x_ma + y_ma);
  h.xy = 0.0;
  h.xz = -al * al * za / z * x_ma / x;
  h.yz = -al * al * za / z * y_ma / y;
  for (double c : {h.xx, h.yy, h.zz, h.xz, h.yz}) require_finite(c, "hess u");
  return h;
}

Diag2 hess_v(double s, double t, Alpha a) {
  if (!(s > 0.0) || !(t > 0.0)) {
    throw DomainError("v is defined on (0, inf)^2");
  }
  const double al = a;
  return {al * (al + 1.0) * positive_pow(s, -al - 2.0),
          al * (al + 1.0) * positive_pow(t, -al - 2.0)};
}

}  // namespace qcx
