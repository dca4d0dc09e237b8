#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kktlab {

/// Outcome of an identity check. A violation is data, not an error:
/// `witness` holds the offending basis tuple when pass == false.
struct CheckReport {
  bool pass = true;
  std::uint64_t checked = 0;
  std::vector<std::size_t> witness;
  std::string detail;
};

/// full enumeration or fixed-seed sampling
struct CheckMode {
  bool full = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = kDefaultSeed;

  static constexpr std::uint64_t kDefaultSeed = 424242;

  static CheckMode Full() { return {}; }
  static CheckMode Sampled(std::uint64_t n, std::uint64_t seed = kDefaultSeed) {
    return {false, n, seed};
  }
};

}  // namespace kktlab
