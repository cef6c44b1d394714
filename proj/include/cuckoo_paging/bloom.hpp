#pragma once

#include <cstdint>
#include <vector>

#include "cuckoo_paging/graph.hpp"

namespace cuckoo_paging {

class BloomFilter {
 public:
  BloomFilter(std::uint32_t bits, std::vector<std::uint64_t> salts);

  void add(KeyId key);
  bool may_contain(KeyId key) const;

  std::uint32_t bit_count() const { return bits_; }
  std::uint32_t hash_count() const { return static_cast<std::uint32_t>(salts_.size()); }
  std::uint32_t set_bits() const;
  double fill_ratio() const { return static_cast<double>(set_bits()) / bits_; }

 private:
  std::uint32_t index(KeyId key, std::uint64_t salt) const;

  std::uint32_t bits_;
  std::vector<std::uint64_t> salts_;
  std::vector<std::uint64_t> words_;
};

class PagedTable;

// One filter per page over the keys whose primary page is that page but which
// are stored on their backup page.
class PageFilters {
 public:
  explicit PageFilters(std::vector<BloomFilter> filters) : filters_(std::move(filters)) {}

  bool may_contain(PageIndex page, KeyId key) const { return filters_[page].may_contain(key); }
  const BloomFilter& operator[](PageIndex page) const { return filters_[page]; }
  std::size_t size() const { return filters_.size(); }

 private:
  std::vector<BloomFilter> filters_;
};

// Filter of round(bits_per_cell * s) bits (at least one) per page with `hashes`
// hash functions; salts come from an MT19937 seeded with (seed, page).
PageFilters build_page_filters(const PagedTable& table, double bits_per_cell,
                               std::uint32_t hashes, std::uint32_t seed);

}  // namespace cuckoo_paging
