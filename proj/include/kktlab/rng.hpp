#pragma once

#include <cstdint>
#include <random>

#include "kktlab/rational.hpp"

namespace kktlab {

/// Deterministic generator for sampled checks. mt19937_64 output is fixed by
/// the standard, so reports are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

  int int_in(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// small random rational, numerator in [-3,3], denominator in {1,2}
  Rational small_rational() {
    return rat(int_in(-3, 3), int_in(1, 2));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace kktlab
