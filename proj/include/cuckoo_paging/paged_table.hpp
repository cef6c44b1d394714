#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cuckoo_paging/graph.hpp"

namespace cuckoo_paging {

class PageFilters;

struct WalkParams {
  double a_bias = 0.97;  // probability a blocked key keeps walking on its primary page
  double b_factor = std::numeric_limits<double>::infinity();  // step budget = b * n

  void validate() const;
  bool unbounded() const { return b_factor == std::numeric_limits<double>::infinity(); }
};

struct InsertResult {
  bool success = false;
  std::uint64_t steps = 0;
  std::uint64_t page_requests = 0;
  KeyId unplaced = kUnplaced;  // nestless key left out on failure
};

struct LookupResult {
  bool found = false;
  std::uint32_t page_requests = 0;
  bool operator==(const LookupResult&) const = default;
};

// One basic step of the walk. `evicted` is empty when the key went into a
// free cell.
struct TraceStep {
  std::uint64_t step = 0;
  KeyId nestless = 0;
  PageIndex page = 0;
  CellIndex cell = 0;
  std::optional<KeyId> evicted;
};

// `step_index nestless_key page cell evicted_key|FREE`, one line per step.
void write_trace(std::ostream& out, std::span<const TraceStep> trace);

// Page-request count of a walk given the sequence of pages it examined: one
// for the first page plus one per change of page.
std::uint64_t page_request_accounting(std::span<const PageIndex> examined_pages);

// Online table of m cells with capacity ell, filled by a biased random walk.
// Keys are ids into a ChoiceStore that must outlive the table.
class PagedTable {
 public:
  // `planned_keys` sizes the global step budget b * planned_keys.
  PagedTable(const Config& config, const ChoiceStore& keys, WalkParams walk,
             std::uint32_t planned_keys);

  // Throws std::invalid_argument if `key` is already stored.
  InsertResult insert(KeyId key, Rng& rng, std::vector<TraceStep>* trace = nullptr);
  bool erase(KeyId key);
  LookupResult lookup(KeyId key, const PageFilters* filters = nullptr) const;

  // Cell holding `key`, or kUnplaced. Primary cells are scanned first.
  CellIndex locate(KeyId key) const;

  void set_walk(WalkParams walk);
  const WalkParams& walk() const { return walk_; }
  bool budget_unbounded() const { return walk_.unbounded(); }
  std::uint64_t budget_left() const { return budget_left_; }

  const Config& config() const { return config_; }
  const ChoiceStore& keys() const { return *keys_; }
  std::uint32_t live_keys() const { return live_; }
  std::uint32_t backup_keys() const { return n_b_; }
  std::uint32_t primary_keys() const { return live_ - n_b_; }
  std::uint64_t total_steps() const { return total_steps_; }
  std::uint64_t total_page_requests() const { return total_page_requests_; }

  std::span<const KeyId> occupants(CellIndex cell) const;
  std::vector<std::uint32_t> backup_per_page() const;  // w

  // Every stored key sits in one of its cells exactly once, loads <= ell,
  // counters agree with the cell contents.
  bool check_legal() const;

 private:
  static constexpr KeyId kEmpty = 0xFFFFFFFFu;

  bool is_free(CellIndex cell) const { return load_[cell] < config_.ell; }
  void place(KeyId key, CellIndex cell, bool backup);
  void remove_at(CellIndex cell, std::uint32_t slot, bool backup);
  std::uint32_t slot_of(CellIndex cell, KeyId key) const;
  // Places into a uniformly chosen free cell of `cells`; false if none.
  bool try_free(KeyId key, std::span<const CellIndex> cells, bool backup, Rng& rng,
                CellIndex& chosen);
  // Random cell then random occupant, avoiding `avoid` while another
  // occupant on the page is available.
  std::pair<CellIndex, std::uint32_t> pick_victim(std::span<const CellIndex> cells, KeyId avoid,
                                                  Rng& rng) const;

  Config config_;
  const ChoiceStore* keys_;
  WalkParams walk_;
  std::uint32_t planned_keys_;
  std::vector<KeyId> slots_;
  std::vector<std::uint32_t> load_;
  std::uint32_t live_ = 0;
  std::uint32_t n_b_ = 0;
  std::uint64_t budget_left_ = 0;
  std::uint64_t total_steps_ = 0;
  std::uint64_t total_page_requests_ = 0;
};

}  // namespace cuckoo_paging
