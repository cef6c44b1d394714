#include "cuckoo_paging/paged_table.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cuckoo_paging/bloom.hpp"

namespace cuckoo_paging {

void WalkParams::validate() const {
  if (!(a_bias >= 0.0 && a_bias <= 1.0)) throw std::invalid_argument("walk: a must lie in [0, 1]");
  if (!(b_factor > 0.0)) throw std::invalid_argument("walk: b must be positive");
}

void write_trace(std::ostream& out, std::span<const TraceStep> trace) {
  for (const TraceStep& step : trace) {
    out << step.step << ' ' << step.nestless << ' ' << step.page << ' ' << step.cell << ' ';
    if (step.evicted)
      out << *step.evicted;
    else
      out << "FREE";
    out << '\n';
  }
}

std::uint64_t page_request_accounting(std::span<const PageIndex> examined_pages) {
  if (examined_pages.empty()) return 0;
  std::uint64_t requests = 1;
  for (std::size_t i = 1; i < examined_pages.size(); ++i)
    if (examined_pages[i] != examined_pages[i - 1]) ++requests;
  return requests;
}

PagedTable::PagedTable(const Config& config, const ChoiceStore& keys, WalkParams walk,
                       std::uint32_t planned_keys)
    : config_(config), keys_(&keys), walk_(walk), planned_keys_(planned_keys) {
  config_.validate();
  if (keys.kp() != config_.kp || keys.kb() != config_.kb)
    throw std::invalid_argument("table: choice store shape differs from config");
  slots_.assign(static_cast<std::size_t>(config_.m) * config_.ell, kEmpty);
  load_.assign(config_.m, 0);
  set_walk(walk);
}

void PagedTable::set_walk(WalkParams walk) {
  walk.validate();
  walk_ = walk;
  if (walk_.unbounded())
    budget_left_ = std::numeric_limits<std::uint64_t>::max();
  else
    budget_left_ = static_cast<std::uint64_t>(std::floor(walk_.b_factor * planned_keys_));
}

std::span<const KeyId> PagedTable::occupants(CellIndex cell) const {
  return {slots_.data() + static_cast<std::size_t>(cell) * config_.ell, load_[cell]};
}

std::uint32_t PagedTable::slot_of(CellIndex cell, KeyId key) const {
  const auto occ = occupants(cell);
  const auto it = std::find(occ.begin(), occ.end(), key);
  return it == occ.end() ? kEmpty : static_cast<std::uint32_t>(it - occ.begin());
}

CellIndex PagedTable::locate(KeyId key) const {
  const KeyChoices choices = (*keys_)[key];
  for (CellIndex cell : choices.primary_cells)
    if (slot_of(cell, key) != kEmpty) return cell;
  for (CellIndex cell : choices.backup_cells)
    if (slot_of(cell, key) != kEmpty) return cell;
  return kUnplaced;
}

void PagedTable::place(KeyId key, CellIndex cell, bool backup) {
  slots_[static_cast<std::size_t>(cell) * config_.ell + load_[cell]++] = key;
  ++live_;
  if (backup) ++n_b_;
}

void PagedTable::remove_at(CellIndex cell, std::uint32_t slot, bool backup) {
  KeyId* base = slots_.data() + static_cast<std::size_t>(cell) * config_.ell;
  base[slot] = base[--load_[cell]];
  base[load_[cell]] = kEmpty;
  --live_;
  if (backup) --n_b_;
}

bool PagedTable::try_free(KeyId key, std::span<const CellIndex> cells, bool backup, Rng& rng,
                          CellIndex& chosen) {
  std::uint32_t count = 0;
  for (CellIndex cell : cells) count += is_free(cell);
  if (count == 0) return false;
  std::uint32_t pick = count == 1 ? 0 : rng.uniform_below(count);
  for (CellIndex cell : cells) {
    if (is_free(cell) && pick-- == 0) {
      chosen = cell;
      break;
    }
  }
  place(key, chosen, backup);
  return true;
}

std::pair<CellIndex, std::uint32_t> PagedTable::pick_victim(std::span<const CellIndex> cells,
                                                            KeyId avoid, Rng& rng) const {
  auto draw = [&rng](std::uint32_t bound) { return bound == 1 ? 0u : rng.uniform_below(bound); };
  auto other_than_avoid = [&](CellIndex cell) {
    std::uint32_t n = 0;
    for (KeyId k : occupants(cell)) n += k != avoid;
    return n;
  };

  std::uint32_t eligible = 0;
  if (avoid != kEmpty)
    for (CellIndex cell : cells) eligible += other_than_avoid(cell) > 0;

  if (eligible == 0) {
    const CellIndex cell = cells[draw(static_cast<std::uint32_t>(cells.size()))];
    return {cell, draw(load_[cell])};
  }
  std::uint32_t pick = draw(eligible);
  CellIndex cell = cells[0];
  for (CellIndex candidate : cells) {
    if (other_than_avoid(candidate) > 0 && pick-- == 0) {
      cell = candidate;
      break;
    }
  }
  pick = draw(other_than_avoid(cell));
  const auto occ = occupants(cell);
  for (std::uint32_t slot = 0; slot < occ.size(); ++slot)
    if (occ[slot] != avoid && pick-- == 0) return {cell, slot};
  return {cell, 0};
}

InsertResult PagedTable::insert(KeyId key, Rng& rng, std::vector<TraceStep>* trace) {
  if (locate(key) != kUnplaced) throw std::invalid_argument("insert: key already stored");

  InsertResult result;
  KeyId nestless = key;
  KeyId evictor = kEmpty;  // key that displaced `nestless` in the previous step
  PageIndex last_page = (*keys_)[key].primary_page;
  result.page_requests = 1;
  auto examine = [&](PageIndex page) {
    if (page != last_page) {
      ++result.page_requests;
      last_page = page;
    }
  };
  auto record = [&](PageIndex page, CellIndex cell, std::optional<KeyId> evicted) {
    if (trace) trace->push_back({result.steps, nestless, page, cell, evicted});
  };

  const bool bounded = !walk_.unbounded();
  while ((!bounded || budget_left_ > 0) && !result.success) {
    const KeyChoices choices = (*keys_)[nestless];
    examine(choices.primary_page);
    CellIndex cell = kUnplaced;
    if (try_free(nestless, choices.primary_cells, false, rng, cell)) {
      record(choices.primary_page, cell, std::nullopt);
      result.success = true;
    } else {
      const bool stay_primary = choices.backup_cells.empty() || rng.coin(walk_.a_bias);
      std::span<const CellIndex> cells = choices.primary_cells;
      PageIndex page = choices.primary_page;
      bool backup = false;
      if (!stay_primary) {
        cells = choices.backup_cells;
        page = choices.backup_page;
        backup = true;
        examine(page);
      }
      if (backup && try_free(nestless, cells, true, rng, cell)) {
        record(page, cell, std::nullopt);
        result.success = true;
      } else {
        const auto [victim_cell, slot] = pick_victim(cells, evictor, rng);
        const KeyId victim = occupants(victim_cell)[slot];
        const bool victim_backup = (*keys_)[victim].is_backup_cell(victim_cell);
        remove_at(victim_cell, slot, victim_backup);
        place(nestless, victim_cell, backup);
        record(page, victim_cell, victim);
        evictor = nestless;
        nestless = victim;
      }
    }
    if (bounded) --budget_left_;
    ++result.steps;
  }

  if (!result.success) result.unplaced = nestless;
  if (result.steps == 0) result.page_requests = 0;
  total_steps_ += result.steps;
  total_page_requests_ += result.page_requests;
  return result;
}

bool PagedTable::erase(KeyId key) {
  const KeyChoices choices = (*keys_)[key];
  for (CellIndex cell : choices.primary_cells) {
    const std::uint32_t slot = slot_of(cell, key);
    if (slot != kEmpty) {
      remove_at(cell, slot, false);
      return true;
    }
  }
  for (CellIndex cell : choices.backup_cells) {
    const std::uint32_t slot = slot_of(cell, key);
    if (slot != kEmpty) {
      remove_at(cell, slot, true);
      return true;
    }
  }
  return false;
}

LookupResult PagedTable::lookup(KeyId key, const PageFilters* filters) const {
  const KeyChoices choices = (*keys_)[key];
  for (CellIndex cell : choices.primary_cells)
    if (slot_of(cell, key) != kEmpty) return {true, 1};
  if (choices.backup_cells.empty()) return {false, 1};
  if (filters && !filters->may_contain(choices.primary_page, key)) return {false, 1};
  for (CellIndex cell : choices.backup_cells)
    if (slot_of(cell, key) != kEmpty) return {true, 2};
  return {false, 2};
}

std::vector<std::uint32_t> PagedTable::backup_per_page() const {
  std::vector<std::uint32_t> w(config_.pages(), 0);
  for (CellIndex cell = 0; cell < config_.m; ++cell) {
    for (KeyId key : occupants(cell)) {
      const KeyChoices choices = (*keys_)[key];
      if (choices.is_backup_cell(cell)) ++w[choices.primary_page];
    }
  }
  return w;
}

bool PagedTable::check_legal() const {
  std::vector<std::uint8_t> seen(keys_->size(), 0);
  std::uint32_t live = 0;
  std::uint32_t backup = 0;
  for (CellIndex cell = 0; cell < config_.m; ++cell) {
    if (load_[cell] > config_.ell) return false;
    for (KeyId key : occupants(cell)) {
      if (key >= keys_->size() || seen[key]) return false;
      seen[key] = 1;
      const KeyChoices choices = (*keys_)[key];
      if (!choices.has_cell(cell)) return false;
      ++live;
      backup += choices.is_backup_cell(cell);
    }
  }
  return live == live_ && backup == n_b_;
}

}  // namespace cuckoo_paging
