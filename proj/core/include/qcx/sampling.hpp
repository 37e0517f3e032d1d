#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qcx/types.hpp"

namespace qcx {

/// Seeded source of sample points. Coordinates are log-uniform so that
/// both the near-boundary and the large-coordinate regime are exercised.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    rng_.seed(seq);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  PointE point(double lo, double hi) {
    const double x = log_uniform(lo, hi);
    const double y = log_uniform(lo, hi);
    const double z = log_uniform(lo, hi);
    return {x, y, z};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qcx
