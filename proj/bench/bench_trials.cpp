// Serial reference loop against the OpenMP trial loop on the same seeds.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "cuckoo_paging/trials.hpp"

using namespace cuckoo_paging;

namespace {

template <typename Run>
double seconds(Run run) {
  const auto start = std::chrono::steady_clock::now();
  run();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same(const std::vector<TrialOutcome>& a, const std::vector<TrialOutcome>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].failed != b[i].failed || a[i].r_p != b[i].r_p || a[i].steps != b[i].steps ||
        a[i].page_requests != b[i].page_requests || a[i].w != b[i].w)
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint32_t trials = argc > 1 ? static_cast<std::uint32_t>(std::atoi(argv[1])) : 16;
  const std::uint32_t m = argc > 2 ? static_cast<std::uint32_t>(std::atoi(argv[2])) : 100000;
  const Config config = Config::make(0.95, m, 1000, 3, 1, 1);
  const WalkParams walk{};
  std::printf("threads=%d trials=%u m=%u\n", omp_get_max_threads(), trials, m);

  std::vector<TrialOutcome> serial, parallel;
  double ts = seconds([&] { serial = run_offline_trials(config, 1, trials, Schedule::kSerial); });
  double tp = seconds([&] { parallel = run_offline_trials(config, 1, trials, Schedule::kParallel); });
  std::printf("offline    serial %.3fs  parallel %.3fs  speedup %.2f  match %s\n", ts, tp, ts / tp,
              same(serial, parallel) ? "yes" : "NO");

  ts = seconds([&] { serial = run_walk_trials(config, walk, 1, trials, Schedule::kSerial); });
  tp = seconds([&] { parallel = run_walk_trials(config, walk, 1, trials, Schedule::kParallel); });
  std::printf("randomwalk serial %.3fs  parallel %.3fs  speedup %.2f  match %s\n", ts, tp, ts / tp,
              same(serial, parallel) ? "yes" : "NO");
  return 0;
}
