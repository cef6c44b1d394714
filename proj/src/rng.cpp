#include "cuckoo_paging/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuckoo_paging {

std::uint32_t Rng::uniform_below(std::uint32_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  constexpr std::uint64_t kRange = std::uint64_t{1} << 32;
  const std::uint64_t limit = kRange - (kRange % bound);
  for (;;) {
    const std::uint64_t w = next_u32();
    if (w < limit) return static_cast<std::uint32_t>(w % bound);
  }
}

std::vector<std::uint32_t> Rng::sample_distinct(std::uint32_t count, std::uint32_t start,
                                                std::uint32_t len) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  sample_distinct_into(count, start, len, out);
  return out;
}

void Rng::sample_distinct_into(std::uint32_t count, std::uint32_t start, std::uint32_t len,
                               std::vector<std::uint32_t>& out) {
  if (count > len) throw std::invalid_argument("sample_distinct: count exceeds range length");
  const auto first = out.size();
  while (out.size() - first < count) {
    const std::uint32_t v = start + uniform_below(len);
    if (std::find(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(), v) == out.end())
      out.push_back(v);
  }
}

}  // namespace cuckoo_paging
