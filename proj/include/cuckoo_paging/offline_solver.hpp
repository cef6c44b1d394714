#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cuckoo_paging/graph.hpp"

namespace cuckoo_paging {

enum class EdgeKind : std::uint8_t { kPrimary, kBackup };
// kForward: unmatched edge traversed key -> cell.
// kBackward: matched edge traversed cell -> key.
enum class Direction : std::uint8_t { kForward, kBackward };

// Residual cost of traversing an edge: primary edges cost 0, backup edges +1
// forward and -1 when undoing a matched backup edge.
constexpr int residual_cost(EdgeKind kind, Direction direction) {
  if (kind == EdgeKind::kPrimary) return 0;
  return direction == Direction::kForward ? 1 : -1;
}

// Bipartite instance with 0/1 edge costs and a uniform right-node capacity.
// Left nodes are keys, right nodes are cells.
struct BipartiteInstance {
  std::uint32_t left_count = 0;
  std::uint32_t right_count = 0;
  std::uint32_t capacity = 1;
  std::vector<std::uint32_t> offsets;  // left_count + 1 entries
  std::vector<std::uint32_t> targets;
  std::vector<EdgeKind> kinds;

  static BipartiteInstance from_graph(const CuckooGraph& graph);

  std::uint32_t add_left(std::span<const std::uint32_t> cells, std::span<const EdgeKind> kinds);
};

struct Placement {
  std::vector<CellIndex> assignment;  // kUnplaced for keys left out
  std::uint32_t m = 0;
  std::uint32_t n_p = 0;
  std::uint32_t n_b = 0;
  std::uint32_t unplaced = 0;
  std::vector<std::uint32_t> w;  // per page: primary page here, stored on backup

  bool feasible() const { return unplaced == 0; }
  std::uint32_t n() const { return static_cast<std::uint32_t>(assignment.size()); }
  double r_p() const { return assignment.empty() ? 1.0 : static_cast<double>(n_p) / n(); }
  double alpha_p() const { return static_cast<double>(n_p) / m; }
};

// Derives counters from a key -> cell assignment. Throws std::invalid_argument
// if a key sits outside its choices or a cell exceeds capacity ell.
Placement make_placement(const CuckooGraph& graph, std::vector<CellIndex> assignment);

// Min-cost left-maximum matching by successive shortest paths, where each
// round finds node-disjoint augmenting paths of cost exactly gamma_hat with a
// layered label-correcting BFS followed by a layered DFS.
class OfflineSolver {
 public:
  struct RoundResult {
    std::uint32_t paths_found = 0;
    bool gamma_incremented = false;
    bool finished = false;
  };

  explicit OfflineSolver(BipartiteInstance instance);

  RoundResult augment_round();
  void run();

  bool finished() const { return finished_; }
  std::uint32_t gamma_hat() const { return gamma_hat_; }
  std::uint32_t rounds() const { return rounds_; }
  std::uint32_t matched_count() const { return matched_; }
  // Number of matched cost-1 edges.
  std::uint32_t matching_cost() const;
  // Sum of the costs of all accepted augmenting paths.
  std::int64_t total_path_cost() const { return total_path_cost_; }

  // Right node of each left node, or kUnplaced.
  std::vector<std::uint32_t> assignment() const;

  // Key in-degree <= 1, right load <= capacity, occupant lists consistent.
  bool is_legal() const;

  const BipartiteInstance& instance() const { return inst_; }

 private:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  static constexpr std::int32_t kUnlabeled = -1;

  int edge_cost(std::uint32_t edge) const { return inst_.kinds[edge] == EdgeKind::kBackup; }
  std::uint32_t right_node(std::uint32_t cell) const { return inst_.left_count + cell; }
  bool is_free_cell(std::uint32_t cell) const { return load_[cell] < inst_.capacity; }

  // Returns free cells at the stopping layer reached at cost gamma_hat.
  std::vector<std::uint32_t> layered_search(bool& any_free_reached, std::int32_t& min_free_cost);
  bool trace_back(std::uint32_t cell);
  void flip_path(std::span<const std::uint32_t> keys, std::span<const std::uint32_t> edges);

  BipartiteInstance inst_;
  std::vector<std::uint32_t> rev_offsets_;  // cell -> incident (key, edge)
  std::vector<std::uint32_t> rev_keys_;
  std::vector<std::uint32_t> rev_edges_;

  std::vector<std::uint32_t> match_edge_;  // per key
  std::vector<std::uint32_t> occupants_;   // capacity slots per cell
  std::vector<std::uint32_t> load_;

  std::vector<std::int32_t> layer_;  // left nodes then right nodes
  std::vector<std::int32_t> cost_;
  std::vector<std::uint8_t> removed_;

  std::uint32_t gamma_hat_ = 0;
  std::uint32_t rounds_ = 0;
  std::uint32_t matched_ = 0;
  std::int64_t total_path_cost_ = 0;
  bool finished_ = false;
};

Placement solve(const CuckooGraph& graph);

}  // namespace cuckoo_paging
