#pragma once

#include <string>
#include <vector>

#include "qcx/types.hpp"

namespace qcx {

/// A twice continuously differentiable reparametrization F: R -> R drawn
/// from a closed set of families. The obstruction checks only need F'(u)
/// and F''(u); every family provides them in closed form.
class MonotoneF {
 public:
  enum class Kind { identity, affine, exponential, shifted_power, polynomial };

  static MonotoneF identity();
  /// slope * t + intercept; slope != 0.
  static MonotoneF affine(double slope, double intercept);
  /// exp(rate * t); rate != 0.
  static MonotoneF exponential(double rate);
  /// (t + shift)^power on t > -shift; power != 0.
  static MonotoneF shifted_power(double shift, double power);
  /// sum_k coeffs[k] t^k.
  static MonotoneF polynomial(std::vector<double> coeffs);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  /// F''(t) / F'(t), evaluated without forming exp(rate * t) for the
  /// exponential family.
  double curvature_ratio(double t) const;

  /// True when F'(t) is nonzero and finite.
  bool strictly_monotone_at(double t) const;

  /// Short human-readable label, e.g. "exp(5*t)".
  std::string label() const;
  /// Family tag used in reports: identity, affine, exponential, ...
  std::string family() const;

 private:
  MonotoneF(Kind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {}
  void require_in_range(double t) const;

  Kind kind_;
  std::vector<double> params_;
};

/// The families the obstruction is exercised against: identity, two affine
/// maps (one decreasing), exp(t), exp(5t), (t+1)^3, (t+1)^0.5, t + t^3.
std::vector<MonotoneF> standard_families();

}  // namespace qcx
