#include "cuckoo_paging/bloom.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cuckoo_paging/paged_table.hpp"

namespace cuckoo_paging {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

BloomFilter::BloomFilter(std::uint32_t bits, std::vector<std::uint64_t> salts)
    : bits_(bits), salts_(std::move(salts)), words_((bits + 63) / 64, 0) {
  if (bits_ == 0) throw std::invalid_argument("bloom: need at least one bit");
  if (salts_.empty()) throw std::invalid_argument("bloom: need at least one hash function");
}

std::uint32_t BloomFilter::index(KeyId key, std::uint64_t salt) const {
  return static_cast<std::uint32_t>(mix64(key * 0x9E3779B97F4A7C15ULL ^ salt) % bits_);
}

void BloomFilter::add(KeyId key) {
  for (std::uint64_t salt : salts_) {
    const std::uint32_t i = index(key, salt);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
}

bool BloomFilter::may_contain(KeyId key) const {
  for (std::uint64_t salt : salts_) {
    const std::uint32_t i = index(key, salt);
    if (!(words_[i / 64] >> (i % 64) & 1)) return false;
  }
  return true;
}

std::uint32_t BloomFilter::set_bits() const {
  std::uint32_t total = 0;
  for (std::uint64_t word : words_) total += static_cast<std::uint32_t>(std::popcount(word));
  return total;
}

PageFilters build_page_filters(const PagedTable& table, double bits_per_cell,
                               std::uint32_t hashes, std::uint32_t seed) {
  if (!(bits_per_cell > 0.0)) throw std::invalid_argument("bloom: bits per cell must be positive");
  if (hashes == 0) throw std::invalid_argument("bloom: need at least one hash function");
  const Config& config = table.config();
  const auto bits = static_cast<std::uint32_t>(
      std::max(1.0, std::round(bits_per_cell * static_cast<double>(config.s))));

  std::vector<BloomFilter> filters;
  filters.reserve(config.pages());
  for (PageIndex page = 0; page < config.pages(); ++page) {
    std::seed_seq seq{seed, page};
    std::mt19937_64 gen(seq);
    std::vector<std::uint64_t> salts(hashes);
    for (auto& salt : salts) salt = gen();
    filters.emplace_back(bits, std::move(salts));
  }
  for (CellIndex cell = 0; cell < config.m; ++cell) {
    for (KeyId key : table.occupants(cell)) {
      const KeyChoices choices = table.keys()[key];
      if (choices.is_backup_cell(cell)) filters[choices.primary_page].add(key);
    }
  }
  return PageFilters(std::move(filters));
}

}  // namespace cuckoo_paging
