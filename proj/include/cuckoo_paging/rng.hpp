#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cuckoo_paging {

// MT19937 stream with the few derived draws the experiments need. All draws
// are defined on raw 32-bit words so results are bit-identical across
// standard library implementations (std::uniform_int_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint32_t seed) : engine_(seed), seed_(seed) {}

  std::uint32_t seed() const { return seed_; }

  std::uint32_t next_u32() { return static_cast<std::uint32_t>(engine_()); }

  // Uniform over [0, bound) by rejection on 32-bit words: accept w when
  // w < 2^32 - (2^32 mod bound), return w mod bound. Throws on bound == 0.
  std::uint32_t uniform_below(std::uint32_t bound);

  // w / 2^32, in [0, 1).
  double unit() { return next_u32() * 0x1.0p-32; }

  // True with probability p; p >= 1 is always true, p <= 0 never.
  bool coin(double p) { return unit() < p; }

  // `count` distinct values of [start, start + len) in draw order, by
  // repeated uniform_below(len) with duplicates rejected.
  std::vector<std::uint32_t> sample_distinct(std::uint32_t count, std::uint32_t start,
                                             std::uint32_t len);

  // Appending variant used by the graph generator to avoid reallocations.
  void sample_distinct_into(std::uint32_t count, std::uint32_t start, std::uint32_t len,
                            std::vector<std::uint32_t>& out);

 private:
  std::mt19937 engine_;
  std::uint32_t seed_;
};

// Per-trial seeding convention for independent trials.
inline std::uint32_t trial_seed(std::uint32_t seed_base, std::uint32_t trial_index) {
  return seed_base + trial_index;
}

}  // namespace cuckoo_paging
