#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nrdyn/ratmap.hpp"

namespace nrdyn::testing {

/// Parameter pairs with a in [0.5, 10] and b/a in [0.05, 0.95].
inline std::vector<Params> random_pairs(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Params> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 0.5 + 9.5 * unit();
    out.emplace_back(a, a * (0.05 + 0.9 * unit()));
  }
  return out;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace nrdyn::testing
