#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cuckoo_paging/rng.hpp"

namespace cuckoo_paging {

using KeyId = std::uint32_t;
using CellIndex = std::uint32_t;
using PageIndex = std::uint32_t;

inline constexpr PageIndex kNoPage = 0xFFFFFFFFu;
inline constexpr CellIndex kUnplaced = 0xFFFFFFFFu;

// Experiment configuration (c, m, s, k_p, k_b, ell). `c` is keys per cell,
// so with ell > 1 it ranges up to ell.
struct Config {
  double c = 0.0;
  std::uint32_t m = 0;
  std::uint32_t s = 0;
  std::uint32_t kp = 0;
  std::uint32_t kb = 0;
  std::uint32_t ell = 1;

  // Throws std::invalid_argument when an invariant is violated.
  static Config make(double c, std::uint32_t m, std::uint32_t s, std::uint32_t kp,
                     std::uint32_t kb, std::uint32_t ell = 1);
  void validate() const;

  std::uint32_t pages() const { return m / s; }
  std::uint32_t choices() const { return kp + kb; }
  // round(c * m), ties up.
  std::uint32_t keys() const;
};

PageIndex page_of(CellIndex cell, const Config& config);

// A key's choice set: k_p cells on the primary page followed by k_b cells on
// the backup page.
struct KeyChoices {
  PageIndex primary_page = kNoPage;
  PageIndex backup_page = kNoPage;
  std::span<const CellIndex> primary_cells;
  std::span<const CellIndex> backup_cells;

  bool is_backup_cell(CellIndex cell) const;
  bool has_cell(CellIndex cell) const;
};

// Append-only flat store of choice sets, indexed by KeyId.
class ChoiceStore {
 public:
  ChoiceStore() = default;
  ChoiceStore(std::uint32_t kp, std::uint32_t kb) : kp_(kp), kb_(kb) {}

  std::uint32_t kp() const { return kp_; }
  std::uint32_t kb() const { return kb_; }
  std::size_t size() const { return primary_page_.size(); }

  KeyChoices operator[](KeyId key) const;

  // Draws one key's choices from `rng` in the order: primary page, primary
  // cells, backup page (skip construction), backup cells.
  KeyId draw(const Config& config, Rng& rng);

  // Appends explicit choices; cells must list k_p primary then k_b backup.
  KeyId append(PageIndex primary_page, PageIndex backup_page, std::span<const CellIndex> cells);

  void reserve(std::size_t keys);

 private:
  std::uint32_t kp_ = 0;
  std::uint32_t kb_ = 0;
  std::vector<PageIndex> primary_page_;
  std::vector<PageIndex> backup_page_;
  std::vector<CellIndex> cells_;
};

struct CuckooGraph {
  Config config;
  ChoiceStore keys;

  std::uint32_t size() const { return static_cast<std::uint32_t>(keys.size()); }
  KeyChoices operator[](KeyId key) const { return keys[key]; }
};

// Fully random graph: keys 0..n-1 drawn in order from `rng`.
CuckooGraph generate(const Config& config, Rng& rng);

// One line per key: `key p b cell1 ... cellk`; b is `-` when k_b = 0.
void write_graph(std::ostream& out, const CuckooGraph& graph);
// Parses the dump format against `config`; throws std::runtime_error on
// malformed input or choices that violate the model.
CuckooGraph read_graph(std::istream& in, const Config& config);

}  // namespace cuckoo_paging
