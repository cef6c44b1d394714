#pragma once

#include <cstdint>
#include <exception>
#include <vector>

#include "cuckoo_paging/analysis.hpp"
#include "cuckoo_paging/graph.hpp"
#include "cuckoo_paging/paged_table.hpp"

namespace cuckoo_paging {

// kSerial is the reference loop; kParallel distributes trials over OpenMP
// threads. Both write outcome i from generator seed_base + i, so results are
// identical regardless of thread count or completion order.
enum class Schedule { kSerial, kParallel };

// One offline trial: generate a graph from Rng(seed) and solve it optimally.
TrialOutcome run_offline_trial(const Config& config, std::uint32_t seed);

// One online trial: generate a graph from Rng(seed), then insert keys
// 0..n-1 in order with the same generator. Fails when the budget runs out.
TrialOutcome run_walk_trial(const Config& config, const WalkParams& walk, std::uint32_t seed);

std::vector<TrialOutcome> run_offline_trials(const Config& config, std::uint32_t seed_base,
                                             std::uint32_t trials, Schedule schedule);
std::vector<TrialOutcome> run_walk_trials(const Config& config, const WalkParams& walk,
                                          std::uint32_t seed_base, std::uint32_t trials,
                                          Schedule schedule);

// Fills out[i] = body(i) for i in [0, out.size()). The first exception thrown
// by any trial is rethrown after the loop.
template <typename Result, typename Body>
void for_each_trial(std::vector<Result>& out, Schedule schedule, Body body) {
  const auto count = static_cast<std::int64_t>(out.size());
  if (schedule == Schedule::kSerial) {
    for (std::int64_t i = 0; i < count; ++i) out[i] = body(static_cast<std::uint32_t>(i));
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[i] = body(static_cast<std::uint32_t>(i));
    } catch (...) {
#pragma omp critical(cuckoo_paging_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace cuckoo_paging
