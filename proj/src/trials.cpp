#include "cuckoo_paging/trials.hpp"

#include "cuckoo_paging/offline_solver.hpp"

namespace cuckoo_paging {

TrialOutcome run_offline_trial(const Config& config, std::uint32_t seed) {
  Rng rng(seed);
  const CuckooGraph graph = generate(config, rng);
  Placement placement = solve(graph);
  TrialOutcome out;
  out.failed = !placement.feasible();
  out.r_p = placement.r_p();
  out.alpha_p = placement.alpha_p();
  out.w = std::move(placement.w);
  return out;
}

TrialOutcome run_walk_trial(const Config& config, const WalkParams& walk, std::uint32_t seed) {
  Rng rng(seed);
  const CuckooGraph graph = generate(config, rng);
  PagedTable table(config, graph.keys, walk, graph.size());
  TrialOutcome out;
  for (KeyId key = 0; key < graph.size(); ++key) {
    if (!table.insert(key, rng).success) {
      out.failed = true;
      break;
    }
  }
  const double n = graph.size() == 0 ? 1.0 : static_cast<double>(graph.size());
  out.r_p = table.live_keys() ? static_cast<double>(table.primary_keys()) / table.live_keys() : 1.0;
  out.alpha_p = static_cast<double>(table.primary_keys()) / config.m;
  out.steps = static_cast<double>(table.total_steps()) / n;
  out.page_requests = static_cast<double>(table.total_page_requests()) / n;
  out.w = table.backup_per_page();
  return out;
}

std::vector<TrialOutcome> run_offline_trials(const Config& config, std::uint32_t seed_base,
                                             std::uint32_t trials, Schedule schedule) {
  std::vector<TrialOutcome> out(trials);
  for_each_trial(out, schedule, [&](std::uint32_t i) {
    return run_offline_trial(config, trial_seed(seed_base, i));
  });
  return out;
}

std::vector<TrialOutcome> run_walk_trials(const Config& config, const WalkParams& walk,
                                          std::uint32_t seed_base, std::uint32_t trials,
                                          Schedule schedule) {
  std::vector<TrialOutcome> out(trials);
  for_each_trial(out, schedule, [&](std::uint32_t i) {
    return run_walk_trial(config, walk, trial_seed(seed_base, i));
  });
  return out;
}

}  // namespace cuckoo_paging
