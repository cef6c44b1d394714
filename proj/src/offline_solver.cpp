#include "cuckoo_paging/offline_solver.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>
#include <utility>

namespace cuckoo_paging {

BipartiteInstance BipartiteInstance::from_graph(const CuckooGraph& graph) {
  BipartiteInstance inst;
  inst.right_count = graph.config.m;
  inst.capacity = graph.config.ell;
  inst.offsets.reserve(graph.size() + 1);
  inst.offsets.push_back(0);
  const std::size_t k = graph.config.choices();
  inst.targets.reserve(graph.size() * k);
  inst.kinds.reserve(graph.size() * k);
  for (KeyId key = 0; key < graph.size(); ++key) {
    const KeyChoices choices = graph[key];
    for (CellIndex cell : choices.primary_cells) {
      inst.targets.push_back(cell);
      inst.kinds.push_back(EdgeKind::kPrimary);
    }
    for (CellIndex cell : choices.backup_cells) {
      inst.targets.push_back(cell);
      inst.kinds.push_back(EdgeKind::kBackup);
    }
    inst.offsets.push_back(static_cast<std::uint32_t>(inst.targets.size()));
  }
  inst.left_count = graph.size();
  return inst;
}

std::uint32_t BipartiteInstance::add_left(std::span<const std::uint32_t> cells,
                                          std::span<const EdgeKind> edge_kinds) {
  if (cells.size() != edge_kinds.size()) throw std::invalid_argument("add_left: size mismatch");
  if (offsets.empty()) offsets.push_back(0);
  for (std::uint32_t cell : cells)
    if (cell >= right_count) throw std::invalid_argument("add_left: cell out of range");
  targets.insert(targets.end(), cells.begin(), cells.end());
  kinds.insert(kinds.end(), edge_kinds.begin(), edge_kinds.end());
  offsets.push_back(static_cast<std::uint32_t>(targets.size()));
  return left_count++;
}

Placement make_placement(const CuckooGraph& graph, std::vector<CellIndex> assignment) {
  const Config& config = graph.config;
  if (assignment.size() != graph.size())
    throw std::invalid_argument("placement: assignment size differs from key count");
  Placement out;
  out.m = config.m;
  out.w.assign(config.pages(), 0);
  std::vector<std::uint32_t> load(config.m, 0);
  for (KeyId key = 0; key < graph.size(); ++key) {
    const CellIndex cell = assignment[key];
    if (cell == kUnplaced) {
      ++out.unplaced;
      continue;
    }
    const KeyChoices choices = graph[key];
    if (!choices.has_cell(cell)) throw std::invalid_argument("placement: key outside its choices");
    if (++load[cell] > config.ell) throw std::invalid_argument("placement: cell over capacity");
    if (choices.is_backup_cell(cell)) {
      ++out.n_b;
      ++out.w[choices.primary_page];
    } else {
      ++out.n_p;
    }
  }
  out.assignment = std::move(assignment);
  return out;
}

OfflineSolver::OfflineSolver(BipartiteInstance instance) : inst_(std::move(instance)) {
  const std::uint32_t n = inst_.left_count;
  const std::uint32_t m = inst_.right_count;
  if (inst_.offsets.size() != static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("solver: malformed instance offsets");
  if (inst_.capacity == 0) throw std::invalid_argument("solver: capacity must be positive");

  rev_offsets_.assign(m + 1, 0);
  for (std::uint32_t cell : inst_.targets) ++rev_offsets_[cell + 1];
  for (std::uint32_t y = 0; y < m; ++y) rev_offsets_[y + 1] += rev_offsets_[y];
  rev_keys_.resize(inst_.targets.size());
  rev_edges_.resize(inst_.targets.size());
  std::vector<std::uint32_t> fill(rev_offsets_.begin(), rev_offsets_.end() - 1);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t e = inst_.offsets[x]; e < inst_.offsets[x + 1]; ++e) {
      const std::uint32_t slot = fill[inst_.targets[e]]++;
      rev_keys_[slot] = x;
      rev_edges_[slot] = e;
    }
  }

  match_edge_.assign(n, kNone);
  occupants_.assign(static_cast<std::size_t>(m) * inst_.capacity, kNone);
  load_.assign(m, 0);
  layer_.assign(static_cast<std::size_t>(n) + m, kUnlabeled);
  cost_.assign(static_cast<std::size_t>(n) + m, 0);
  removed_.assign(static_cast<std::size_t>(n) + m, 0);
}

std::vector<std::uint32_t> OfflineSolver::layered_search(bool& any_free_reached,
                                                         std::int32_t& min_free_cost) {
  const std::uint32_t n = inst_.left_count;
  const std::uint32_t cap = inst_.capacity;
  const auto target_cost = static_cast<std::int32_t>(gamma_hat_);
  std::fill(layer_.begin(), layer_.end(), kUnlabeled);

  std::vector<std::uint32_t> frontier;
  std::vector<std::uint32_t> next;
  std::vector<std::uint32_t> stop_set;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (match_edge_[x] == kNone) {
      layer_[x] = 0;
      cost_[x] = 0;
      frontier.push_back(x);
    }
  }

  // Label-correcting breadth-first layering: a node is re-labelled (and moved
  // to the current layer) whenever it is reached by a path of lesser cost.
  std::int32_t level = 0;
  auto relax = [&](std::uint32_t node, std::int32_t candidate) {
    if (layer_[node] == kUnlabeled || candidate < cost_[node]) {
      cost_[node] = candidate;
      if (layer_[node] != level + 1) {
        layer_[node] = level + 1;
        next.push_back(node);
      }
    }
  };

  while (!frontier.empty()) {
    next.clear();
    if (level % 2 == 0) {
      for (std::uint32_t x : frontier) {
        const std::int32_t base = cost_[x];
        for (std::uint32_t e = inst_.offsets[x]; e < inst_.offsets[x + 1]; ++e) {
          if (e == match_edge_[x]) continue;
          relax(right_node(inst_.targets[e]), base + edge_cost(e));
        }
      }
      for (std::uint32_t node : next) {
        const std::uint32_t cell = node - n;
        assert(!(is_free_cell(cell) && cost_[node] < target_cost));
        if (is_free_cell(cell) && cost_[node] == target_cost) stop_set.push_back(cell);
      }
      if (!stop_set.empty()) {
        any_free_reached = true;
        min_free_cost = target_cost;
        return stop_set;
      }
    } else {
      for (std::uint32_t node : frontier) {
        const std::uint32_t cell = node - n;
        const std::int32_t base = cost_[node];
        for (std::uint32_t i = 0; i < load_[cell]; ++i) {
          const std::uint32_t x = occupants_[static_cast<std::size_t>(cell) * cap + i];
          relax(x, base - edge_cost(match_edge_[x]));
        }
      }
    }
    frontier.swap(next);
    ++level;
  }

  // Labels have converged to shortest-path costs.
  any_free_reached = false;
  min_free_cost = std::numeric_limits<std::int32_t>::max();
  for (std::uint32_t cell = 0; cell < inst_.right_count; ++cell) {
    const std::uint32_t node = right_node(cell);
    if (layer_[node] != kUnlabeled && is_free_cell(cell)) {
      any_free_reached = true;
      min_free_cost = std::min(min_free_cost, cost_[node]);
    }
  }
  return stop_set;
}

bool OfflineSolver::trace_back(std::uint32_t start_cell) {
  const std::uint32_t n = inst_.left_count;
  struct Frame {
    std::uint32_t node;
    std::uint32_t cursor;  // next reverse-adjacency slot for cell frames
    std::uint32_t edge;    // forward edge used by a key frame
  };
  std::vector<Frame> stack;
  const std::uint32_t start = right_node(start_cell);
  if (removed_[start]) return false;
  stack.push_back({start, rev_offsets_[start_cell], kNone});

  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.node >= n) {
      const std::uint32_t cell = top.node - n;
      bool descended = false;
      while (top.cursor < rev_offsets_[cell + 1]) {
        const std::uint32_t slot = top.cursor++;
        const std::uint32_t x = rev_keys_[slot];
        const std::uint32_t e = rev_edges_[slot];
        if (removed_[x] || e == match_edge_[x]) continue;
        if (layer_[x] != layer_[top.node] - 1) continue;
        if (cost_[x] + edge_cost(e) != cost_[top.node]) continue;
        stack.push_back({x, 0, e});
        descended = true;
        break;
      }
      if (!descended) {
        removed_[top.node] = 1;
        stack.pop_back();
      }
      continue;
    }

    const std::uint32_t x = top.node;
    if (layer_[x] == 0) {
      assert(match_edge_[x] == kNone);
      std::vector<std::uint32_t> keys;
      std::vector<std::uint32_t> edges;
      for (const Frame& f : stack) {
        removed_[f.node] = 1;
        if (f.node < n) {
          keys.push_back(f.node);
          edges.push_back(f.edge);
        }
      }
      flip_path(keys, edges);
      return true;
    }
    const std::uint32_t me = match_edge_[x];
    const std::uint32_t y = right_node(inst_.targets[me]);
    if (top.cursor == 0 && !removed_[y] && layer_[y] == layer_[x] - 1 &&
        cost_[y] - edge_cost(me) == cost_[x]) {
      top.cursor = 1;
      stack.push_back({y, rev_offsets_[inst_.targets[me]], kNone});
      continue;
    }
    removed_[x] = 1;
    stack.pop_back();
  }
  return false;
}

void OfflineSolver::flip_path(std::span<const std::uint32_t> keys,
                              std::span<const std::uint32_t> edges) {
  const std::uint32_t cap = inst_.capacity;
  std::int64_t path_cost = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::uint32_t x = keys[i];
    const std::uint32_t old = match_edge_[x];
    if (old == kNone) continue;
    path_cost -= edge_cost(old);
    const std::uint32_t cell = inst_.targets[old];
    std::uint32_t* slots = occupants_.data() + static_cast<std::size_t>(cell) * cap;
    std::uint32_t* it = std::find(slots, slots + load_[cell], x);
    assert(it != slots + load_[cell]);
    *it = slots[--load_[cell]];
    slots[load_[cell]] = kNone;
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::uint32_t x = keys[i];
    const std::uint32_t e = edges[i];
    path_cost += edge_cost(e);
    const std::uint32_t cell = inst_.targets[e];
    assert(load_[cell] < cap);
    occupants_[static_cast<std::size_t>(cell) * cap + load_[cell]++] = x;
    match_edge_[x] = e;
  }
  assert(path_cost == static_cast<std::int64_t>(gamma_hat_));
  total_path_cost_ += path_cost;
  ++matched_;
}

OfflineSolver::RoundResult OfflineSolver::augment_round() {
  RoundResult result;
  if (finished_) {
    result.finished = true;
    return result;
  }
  ++rounds_;
  bool any_free = false;
  std::int32_t min_free_cost = 0;
  const std::vector<std::uint32_t> stop_set = layered_search(any_free, min_free_cost);
  if (stop_set.empty()) {
    if (!any_free) {
      finished_ = true;
      result.finished = true;
      return result;
    }
    assert(min_free_cost > static_cast<std::int32_t>(gamma_hat_));
    const std::uint32_t before = gamma_hat_;
    ++gamma_hat_;
    assert(gamma_hat_ > before);
    (void)before;
    result.gamma_incremented = true;
    return result;
  }

  std::fill(removed_.begin(), removed_.end(), 0);
  for (std::uint32_t cell : stop_set)
    if (trace_back(cell)) ++result.paths_found;
  // A stop cell always has an intact tight chain back to a free key.
  assert(result.paths_found > 0);
  return result;
}

void OfflineSolver::run() {
  while (!augment_round().finished) {
  }
}

std::uint32_t OfflineSolver::matching_cost() const {
  std::uint32_t total = 0;
  for (std::uint32_t e : match_edge_)
    if (e != kNone) total += static_cast<std::uint32_t>(edge_cost(e));
  return total;
}

std::vector<std::uint32_t> OfflineSolver::assignment() const {
  std::vector<std::uint32_t> out(inst_.left_count, kUnplaced);
  for (std::uint32_t x = 0; x < inst_.left_count; ++x)
    if (match_edge_[x] != kNone) out[x] = inst_.targets[match_edge_[x]];
  return out;
}

bool OfflineSolver::is_legal() const {
  const std::uint32_t cap = inst_.capacity;
  std::vector<std::uint32_t> seen(inst_.right_count, 0);
  std::uint32_t matched = 0;
  for (std::uint32_t x = 0; x < inst_.left_count; ++x) {
    const std::uint32_t e = match_edge_[x];
    if (e == kNone) continue;
    if (e < inst_.offsets[x] || e >= inst_.offsets[x + 1]) return false;
    const std::uint32_t cell = inst_.targets[e];
    const std::uint32_t* slots = occupants_.data() + static_cast<std::size_t>(cell) * cap;
    if (std::find(slots, slots + load_[cell], x) == slots + load_[cell]) return false;
    ++seen[cell];
    ++matched;
  }
  for (std::uint32_t cell = 0; cell < inst_.right_count; ++cell)
    if (seen[cell] != load_[cell] || load_[cell] > cap) return false;
  return matched == matched_;
}

Placement solve(const CuckooGraph& graph) {
  OfflineSolver solver(BipartiteInstance::from_graph(graph));
  solver.run();
  return make_placement(graph, solver.assignment());
}

}  // namespace cuckoo_paging
