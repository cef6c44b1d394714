// Exhaustive reference for the offline solver on tiny instances.
#pragma once

#include <cstdint>
#include <vector>

#include "cuckoo_paging/offline_solver.hpp"

namespace cuckoo_paging::testing {

struct BruteForceResult {
  std::uint32_t placed = 0;
  std::uint32_t backup = 0;  // minimal over placements with `placed` keys
};

// Tries every key in every cell (or unplaced), honoring capacity.
// Maximizes placed keys, then minimizes backup edges used.
inline BruteForceResult brute_force(const BipartiteInstance& inst) {
  std::vector<std::uint32_t> load(inst.right_count, 0);
  BruteForceResult best{0, 0};
  bool have_best = false;
  const std::uint32_t n = inst.left_count;

  auto better = [&](std::uint32_t placed, std::uint32_t backup) {
    if (!have_best) return true;
    return placed > best.placed || (placed == best.placed && backup < best.backup);
  };

  auto recurse = [&](auto&& self, std::uint32_t key, std::uint32_t placed,
                     std::uint32_t backup) -> void {
    if (have_best && placed + (n - key) < best.placed) return;
    if (key == n) {
      if (better(placed, backup)) {
        best = {placed, backup};
        have_best = true;
      }
      return;
    }
    for (std::uint32_t e = inst.offsets[key]; e < inst.offsets[key + 1]; ++e) {
      const std::uint32_t cell = inst.targets[e];
      if (load[cell] >= inst.capacity) continue;
      ++load[cell];
      self(self, key + 1, placed + 1, backup + (inst.kinds[e] == EdgeKind::kBackup));
      --load[cell];
    }
    self(self, key + 1, placed, backup);
  };
  recurse(recurse, 0, 0, 0);
  return best;
}

}  // namespace cuckoo_paging::testing
