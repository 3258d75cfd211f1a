#pragma once

#include <cstdint>
#include <random>

#include "cpwlkit/linalg/matrix.hpp"

namespace cpwlkit::cpwl {

/// Deterministic rational sampler: numerators uniform in [-10^4, 10^4],
/// denominator 10^3.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}

  linalg::Rational scalar() { return linalg::Rational(numerator_(rng_), 1000); }

  linalg::RatVector point(std::size_t dim) {
    linalg::RatVector x(dim);
    for (auto& v : x) v = scalar();
    return x;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<std::int64_t> numerator_{-10000, 10000};
};

}  // namespace cpwlkit::cpwl
