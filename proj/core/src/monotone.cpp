#include "qcx/monotone.hpp"

#include <cmath>
#include <sstream>

namespace qcx {

MonotoneF MonotoneF::identity() { return {Kind::identity, {}}; }

MonotoneF MonotoneF::affine(double slope, double intercept) {
  if (slope == 0.0 || !std::isfinite(slope) || !std::isfinite(intercept)) {
    throw DomainError("affine F needs a finite nonzero slope");
  }
  return {Kind::affine, {slope, intercept}};
}

MonotoneF MonotoneF::exponential(double rate) {
  if (rate == 0.0 || !std::isfinite(rate)) {
    throw DomainError("exp(rate*t) needs a finite nonzero rate");
  }
  return {Kind::exponential, {rate}};
}

MonotoneF MonotoneF::shifted_power(double shift, double power) {
  if (power == 0.0 || !std::isfinite(power) || !std::isfinite(shift)) {
    throw DomainError("(t+c)^k needs a finite nonzero power");
  }
  return {Kind::shifted_power, {shift, power}};
}

MonotoneF MonotoneF::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) {
    throw DomainError("polynomial F needs at least one coefficient");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw DomainError("polynomial coefficient not finite");
  }
  return {Kind::polynomial, std::move(coeffs)};
}

void MonotoneF::require_in_range(double t) const {
  if (kind_ == Kind::shifted_power && !(t + params_[0] > 0.0)) {
    throw DomainError("(t+c)^k evaluated outside t + c > 0");
  }
}

double MonotoneF::value(double t) const {
  require_in_range(t);
  switch (kind_) {
    case Kind::identity: return t;
    case Kind::affine: return params_[0] * t + params_[1];
    case Kind::exponential: return std::exp(params_[0] * t);
    case Kind::shifted_power: return std::pow(t + params_[0], params_[1]);
    case Kind::polynomial: {
      double acc = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) {
        acc = acc * t + *it;
      }
      return acc;
    }
  }
  return 0.0;
}

double MonotoneF::d1(double t) const {
  require_in_range(t);
  switch (kind_) {
    case Kind::identity: return 1.0;
    case Kind::affine: return params_[0];
    case Kind::exponential: return params_[0] * std::exp(params_[0] * t);
    case Kind::shifted_power:
      return params_[1] * std::pow(t + params_[0], params_[1] - 1.0);
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t k = params_.size(); k-- > 1;) {
        acc = acc * t + static_cast<double>(k) * params_[k];
      }
      return acc;
    }
  }
  return 0.0;
}

double MonotoneF::d2(double t) const {
  require_in_range(t);
  switch (kind_) {
    case Kind::identity:
    case Kind::affine: return 0.0;
    case Kind::exponential:
      return params_[0] * params_[0] * std::exp(params_[0] * t);
    case Kind::shifted_power:
      return params_[1] * (params_[1] - 1.0) *
             std::pow(t + params_[0], params_[1] - 2.0);
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t k = params_.size(); k-- > 2;) {
        acc = acc * t + static_cast<double>(k * (k - 1)) * params_[k];
      }
      return acc;
    }
  }
  return 0.0;
}

double MonotoneF::curvature_ratio(double t) const {
  require_in_range(t);
  switch (kind_) {
    case Kind::identity:
    case Kind::affine: return 0.0;
    case Kind::exponential: return params_[0];
    case Kind::shifted_power: return (params_[1] - 1.0) / (t + params_[0]);
    case Kind::polynomial: {
      const double first = d1(t);
      if (first == 0.0) throw DomainError("F'(t) = 0 for polynomial F");
      return d2(t) / first;
    }
  }
  return 0.0;
}

bool MonotoneF::strictly_monotone_at(double t) const {
  if (kind_ == Kind::shifted_power && !(t + params_[0] > 0.0)) return false;
  switch (kind_) {
    case Kind::identity:
    case Kind::affine:
    case Kind::exponential:
      // Sign of F' does not depend on t; overflow of exp is not a sign change.
      return true;
    default: {
      const double first = d1(t);
      return first != 0.0 && std::isfinite(first);
    }
  }
}

std::string MonotoneF::family() const {
  switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::affine: return "affine";
    case Kind::exponential: return "exponential";
    case Kind::shifted_power: return "shifted_power";
    case Kind::polynomial: return "polynomial";
  }
  return "unknown";
}

std::string MonotoneF::label() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::identity: os << "t"; break;
    case Kind::affine: os << params_[0] << "*t+" << params_[1]; break;
    case Kind::exponential: os << "exp(" << params_[0] << "*t)"; break;
    case Kind::shifted_power:
      os << "(t+" << params_[0] << ")^" << params_[1];
      break;
    case Kind::polynomial: {
      os << "poly[";
      for (std::size_t k = 0; k < params_.size(); ++k) {
        os << (k ? "," : "") << params_[k];
      }
      os << "]";
      break;
    }
  }
  return os.str();
}

std::vector<MonotoneF> standard_families() {
  return {
      MonotoneF::identity(),
      MonotoneF::affine(3.0, 7.0),
      MonotoneF::affine(-2.0, 1.0),
      MonotoneF::exponential(1.0),
      MonotoneF::exponential(5.0),
      MonotoneF::shifted_power(1.0, 3.0),
      MonotoneF::shifted_power(1.0, 0.5),
      MonotoneF::polynomial({0.0, 1.0, 0.0, 1.0}),
  };
}

}  // namespace qcx
