#include <stdexcept>
#include <vector>

#include "brute_force.hpp"
#include "cuckoo_paging/offline_solver.hpp"
#include "doctest.h"
#include "instances.hpp"

using namespace cuckoo_paging;
using testing::brute_force;

namespace {

// Runs round by round, checking legality, gamma monotonicity and cost bookkeeping.
OfflineSolver run_checked(const BipartiteInstance& inst) {
  OfflineSolver solver(inst);
  std::uint32_t last_gamma = 0;
  std::uint32_t last_matched = 0;
  while (!solver.finished()) {
    const auto round = solver.augment_round();
    REQUIRE(solver.is_legal());
    REQUIRE(solver.gamma_hat() >= last_gamma);
    REQUIRE(solver.matched_count() == last_matched + round.paths_found);
    REQUIRE(solver.total_path_cost() == static_cast<std::int64_t>(solver.matching_cost()));
    last_gamma = solver.gamma_hat();
    last_matched = solver.matched_count();
  }
  return solver;
}

BipartiteInstance node_copies(const BipartiteInstance& inst) {
  BipartiteInstance out;
  out.right_count = inst.right_count * inst.capacity;
  out.capacity = 1;
  for (std::uint32_t key = 0; key < inst.left_count; ++key) {
    std::vector<std::uint32_t> cells;
    std::vector<EdgeKind> kinds;
    for (std::uint32_t e = inst.offsets[key]; e < inst.offsets[key + 1]; ++e)
      for (std::uint32_t j = 0; j < inst.capacity; ++j) {
        cells.push_back(inst.targets[e] * inst.capacity + j);
        kinds.push_back(inst.kinds[e]);
      }
    out.add_left(cells, kinds);
  }
  return out;
}

// Arbitrary bipartite instance, not tied to the page model.
BipartiteInstance random_instance(Rng& rng) {
  BipartiteInstance inst;
  inst.right_count = 1 + rng.uniform_below(12);
  inst.capacity = 1 + rng.uniform_below(2);
  const std::uint32_t n = 1 + rng.uniform_below(10);
  for (std::uint32_t key = 0; key < n; ++key) {
    const std::uint32_t degree = rng.uniform_below(std::min(4u, inst.right_count) + 1);
    const auto cells = rng.sample_distinct(degree, 0, inst.right_count);
    std::vector<EdgeKind> kinds;
    for (std::uint32_t i = 0; i < degree; ++i)
      kinds.push_back(rng.coin(0.3) ? EdgeKind::kBackup : EdgeKind::kPrimary);
    inst.add_left(cells, kinds);
  }
  return inst;
}

}  // namespace

TEST_SUITE("offline_solver") {
  TEST_CASE("residual costs") {
    CHECK(residual_cost(EdgeKind::kPrimary, Direction::kForward) == 0);
    CHECK(residual_cost(EdgeKind::kPrimary, Direction::kBackward) == 0);
    CHECK(residual_cost(EdgeKind::kBackup, Direction::kForward) == 1);
    CHECK(residual_cost(EdgeKind::kBackup, Direction::kBackward) == -1);
  }

  TEST_CASE("single key lands on its primary page") {
    Rng rng(1);
    const CuckooGraph graph = generate(Config::make(0.01, 100, 10, 3, 1), rng);
    REQUIRE(graph.size() == 1);
    const Placement placement = solve(graph);
    CHECK(placement.feasible());
    CHECK(placement.n_b == 0);
    CHECK(placement.n_p == 1);
    CHECK_FALSE(graph[0].is_backup_cell(placement.assignment[0]));
  }

  TEST_CASE("first round finds cost-0 paths") {
    Rng rng(2);
    const CuckooGraph graph = generate(Config::make(0.5, 100, 10, 3, 1), rng);
    OfflineSolver solver(BipartiteInstance::from_graph(graph));
    const auto round = solver.augment_round();
    CHECK(round.paths_found > 0);
    CHECK(solver.gamma_hat() == 0);
    CHECK(solver.matching_cost() == 0);
  }

  TEST_CASE("saturated primary cell forces a cost-1 path") {
    // Key 0 can only use cell 0. Key 1 shares cell 0 and has backup cell 2.
    // Key 2 has primary cell 1 only.
    BipartiteInstance inst;
    inst.right_count = 4;
    const std::vector<std::uint32_t> c0{0}, c1{0, 2}, c2{1};
    const std::vector<EdgeKind> p{EdgeKind::kPrimary};
    const std::vector<EdgeKind> pb{EdgeKind::kPrimary, EdgeKind::kBackup};
    inst.add_left(c0, p);
    inst.add_left(c1, pb);
    inst.add_left(c2, p);

    OfflineSolver solver(inst);
    auto round = solver.augment_round();
    CHECK(round.paths_found == 2);
    CHECK(solver.gamma_hat() == 0);
    round = solver.augment_round();
    CHECK(round.paths_found == 0);
    CHECK(round.gamma_incremented);
    CHECK(solver.gamma_hat() == 1);
    round = solver.augment_round();
    CHECK(round.paths_found == 1);
    solver.run();
    CHECK(solver.matched_count() == 3);
    CHECK(solver.matching_cost() == 1);
    const auto assignment = solver.assignment();
    CHECK(assignment[0] == 0);
    CHECK(assignment[1] == 2);
    CHECK(assignment[2] == 1);
  }

  TEST_CASE("no augmenting path terminates") {
    BipartiteInstance inst;
    inst.right_count = 1;
    const std::vector<std::uint32_t> cells{0};
    const std::vector<EdgeKind> kinds{EdgeKind::kBackup};
    inst.add_left(cells, kinds);
    inst.add_left(cells, kinds);
    OfflineSolver solver(inst);
    solver.run();
    CHECK(solver.matched_count() == 1);
    CHECK(solver.matching_cost() == 1);
    const auto round = solver.augment_round();
    CHECK(round.paths_found == 0);
    CHECK(round.finished);
  }

  TEST_CASE("8 keys on 8 cells matches exhaustive search") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
      const CuckooGraph graph = generate(Config::make(1.0, 8, 4, 2, 1), rng);
      const auto inst = BipartiteInstance::from_graph(graph);
      const auto expect = brute_force(inst);
      const Placement got = solve(graph);
      REQUIRE(got.n() - got.unplaced == expect.placed);
      REQUIRE(got.n_b == expect.backup);
    }
  }

  TEST_CASE("page-model instances match exhaustive search") {
    Rng rng(1000);
    for (int i = 0; i < 1500; ++i) {
      const CuckooGraph graph = testing::random_tiny_graph(rng);
      const auto inst = BipartiteInstance::from_graph(graph);
      const auto expect = brute_force(inst);
      const OfflineSolver solver = run_checked(inst);
      REQUIRE(solver.matched_count() == expect.placed);
      REQUIRE(solver.matching_cost() == expect.backup);
      const Placement placement = make_placement(graph, solver.assignment());
      REQUIRE(placement.n_b == expect.backup);
      REQUIRE(placement.unplaced == graph.size() - expect.placed);
    }
  }

  TEST_CASE("arbitrary instances match exhaustive search") {
    Rng rng(2000);
    for (int i = 0; i < 1500; ++i) {
      const auto inst = random_instance(rng);
      const auto expect = brute_force(inst);
      const OfflineSolver solver = run_checked(inst);
      REQUIRE(solver.matched_count() == expect.placed);
      REQUIRE(solver.matching_cost() == expect.backup);
    }
  }

  TEST_CASE("capacity equals node copies") {
    Rng rng(3000);
    int checked = 0;
    while (checked < 500) {
      auto inst = random_instance(rng);
      if (inst.capacity < 2) continue;
      ++checked;
      OfflineSolver native(inst);
      native.run();
      OfflineSolver copied(node_copies(inst));
      copied.run();
      REQUIRE(native.matched_count() == copied.matched_count());
      REQUIRE(native.matching_cost() == copied.matching_cost());
    }
  }

  TEST_CASE("larger instances stay legal with cost bookkeeping") {
    Rng rng(4000);
    for (double c : {0.9, 0.97, 1.0}) {
      const CuckooGraph graph = generate(Config::make(c, 2000, 20, 3, 1), rng);
      const OfflineSolver solver = run_checked(BipartiteInstance::from_graph(graph));
      const Placement placement = make_placement(graph, solver.assignment());
      CHECK(placement.n_b == solver.matching_cost());
      CHECK(placement.n_p + placement.n_b + placement.unplaced == graph.size());
      std::uint32_t w_total = 0;
      for (auto w : placement.w) w_total += w;
      CHECK(w_total == placement.n_b);
    }
  }

  TEST_CASE("placement validation") {
    Rng rng(5);
    const CuckooGraph graph = generate(Config::make(0.2, 20, 10, 2, 1), rng);
    std::vector<CellIndex> bad(graph.size(), kUnplaced);
    CellIndex outside = 0;
    while (graph[0].has_cell(outside)) ++outside;
    bad[0] = outside;
    CHECK_THROWS_AS(make_placement(graph, bad), std::invalid_argument);
    CHECK_THROWS_AS(make_placement(graph, {}), std::invalid_argument);

    std::vector<CellIndex> twice(graph.size(), kUnplaced);
    twice[0] = graph[0].primary_cells[0];
    KeyId other = 1;
    while (other < graph.size() && !graph[other].has_cell(twice[0])) ++other;
    if (other < graph.size()) {
      twice[other] = twice[0];
      CHECK_THROWS_AS(make_placement(graph, twice), std::invalid_argument);
    }
  }
}
