// Builds the partition for a = 4.01, b = 2.5 and follows the critical orbit.

#include <cstdio>

#include "nrdyn/nrdyn.hpp"

int main() {
  const nrdyn::Params p(4.01, 2.5);
  const auto pp = nrdyn::build_partition(p);

  std::printf("partition points and their images on Omega\n");
  for (int i = 1; i <= static_cast<int>(nrdyn::kPartitionSize); ++i) {
    const auto w = pp.S(i);
    std::printf("  x%-2d = %+.9f   S%-2d = (%+.9f, %+.9f)\n", i, pp.x(i), i, w.real(), w.imag());
  }

  const auto itin = nrdyn::itinerary_interval(p, pp, 0.0, 5000);
  const auto rep = nrdyn::detect_periodicity(itin.source_orbit, itin, 1e-8);
  std::printf("critical orbit: ");
  for (std::size_t k = 0; k < 12; ++k) std::printf("%s ", itin.symbols[k].to_string().c_str());
  std::printf("...\n");
  if (rep.eventually_periodic)
    std::printf("eventually periodic: preperiod %zu, period %zu\n", rep.preperiod, rep.period);
  else
    std::printf("no period found within %zu steps\n", itin.symbols.size());
}
