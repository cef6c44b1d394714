// Random tiny configurations for oracle comparisons.
#pragma once

#include <vector>

#include "cuckoo_paging/graph.hpp"
#include "cuckoo_paging/rng.hpp"

namespace cuckoo_paging::testing {

// m <= 12, n <= 10, k_p <= 2, k_b <= 1, ell <= 2.
inline CuckooGraph random_tiny_graph(Rng& rng) {
  for (;;) {
    const std::uint32_t m = 2 + rng.uniform_below(11);
    std::vector<std::uint32_t> divisors;
    for (std::uint32_t s = 1; s <= m; ++s)
      if (m % s == 0) divisors.push_back(s);
    const std::uint32_t s = divisors[rng.uniform_below(static_cast<std::uint32_t>(divisors.size()))];
    const std::uint32_t kp = 1 + rng.uniform_below(s >= 2 ? 2 : 1);
    const std::uint32_t kb = m / s >= 2 ? rng.uniform_below(2) : 0;
    const std::uint32_t ell = 1 + rng.uniform_below(2);
    const std::uint32_t n = 1 + rng.uniform_below(10);
    Config config = Config::make(static_cast<double>(n) / m, m, s, kp, kb, ell);
    if (config.keys() != n) continue;
    return generate(config, rng);
  }
}

}  // namespace cuckoo_paging::testing
