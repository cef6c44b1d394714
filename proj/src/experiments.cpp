#include "cuckoo_paging/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cuckoo_paging/offline_solver.hpp"

namespace cuckoo_paging {
namespace {

using Clock = std::chrono::steady_clock;

// Offline rows carry no walk; a_bias 0 marks the column as unused.
constexpr WalkParams kOfflineWalk{0.0, std::numeric_limits<double>::infinity()};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Config with_load(Config config, double c) {
  config.c = c;
  config.validate();
  return config;
}

void fill_requests(PointReport& point, std::uint32_t hashes) {
  const TrialStats& stats = point.stats;
  if (stats.failures == stats.trials) return;
  point.successful_requests = expected_page_requests(std::clamp(stats.r_p.mean, 0.0, 1.0));
  if (!stats.w_frequency.empty() && point.config.kb > 0)
    point.unsuccessful_requests = unsuccessful_search_requests(
        stats.w_frequency, point.config.kp, point.config.s, hashes);
  else
    point.unsuccessful_requests = 1.0;
}

PointReport offline_point(const ExperimentSpec& spec, double c) {
  const auto start = Clock::now();
  PointReport point;
  point.config = with_load(spec.config, c);
  point.walk = kOfflineWalk;
  point.load = c;
  const auto outcomes = run_offline_trials(point.config, spec.seed_base, spec.trials, spec.schedule);
  point.stats = aggregate(outcomes);
  fill_requests(point, spec.filter_hashes);
  point.seconds = seconds_since(start);
  return point;
}

PointReport walk_point(const ExperimentSpec& spec, double c, const WalkParams& walk) {
  const auto start = Clock::now();
  PointReport point;
  point.config = with_load(spec.config, c);
  point.walk = walk;
  point.load = c;
  const auto outcomes =
      run_walk_trials(point.config, walk, spec.seed_base, spec.trials, spec.schedule);
  point.stats = aggregate(outcomes);
  fill_requests(point, spec.filter_hashes);
  point.seconds = seconds_since(start);
  return point;
}

std::vector<double> frequencies(const std::vector<std::vector<std::uint32_t>>& per_page) {
  std::vector<std::uint64_t> counts;
  std::uint64_t pages = 0;
  for (const auto& w_values : per_page) {
    for (std::uint32_t w : w_values) {
      if (w >= counts.size()) counts.resize(w + 1, 0);
      ++counts[w];
      ++pages;
    }
  }
  std::vector<double> out(counts.size());
  for (std::size_t w = 0; w < counts.size(); ++w)
    out[w] = static_cast<double>(counts[w]) / static_cast<double>(pages);
  return out;
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kThresholdSweep: return "threshold";
    case ExperimentKind::kOfflineFrac: return "offline";
    case ExperimentKind::kRandomWalk: return "randomwalk";
    case ExperimentKind::kBiasSweep: return "bias-sweep";
    case ExperimentKind::kDynamics: return "dynamics";
    case ExperimentKind::kSmallPages: return "smallpages";
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("experiment: " + what); };
  if (trials < 1) fail("need at least one trial");
  Config probe = config;
  probe.c = 0.0;
  probe.validate();
  walk.validate();
  switch (kind) {
    case ExperimentKind::kThresholdSweep:
      if (!(c_start < c_end)) fail("sweep needs c_start < c_end");
      if (!(c_step > 0.0)) fail("sweep needs a positive step");
      break;
    case ExperimentKind::kBiasSweep:
      if (a_grid.empty()) fail("bias sweep needs at least one a value");
      for (double a : a_grid)
        if (!(a >= 0.0 && a <= 1.0)) fail("bias grid values must lie in [0, 1]");
      if (loads.size() != 1) fail("bias sweep runs at exactly one load factor");
      break;
    case ExperimentKind::kSmallPages:
      if (config.kp != 1 || config.kb != 1 || config.s != 1 || config.ell < 2)
        fail("small pages need k_p = k_b = 1, s = 1 and ell >= 2");
      if (loads.empty()) fail("need at least one load factor");
      break;
    case ExperimentKind::kDynamics:
      if (loads.size() != 1) fail("dynamics runs at exactly one load factor");
      if (!(phase2_multiple >= 0.0)) fail("phase-2 multiple must be non-negative");
      break;
    default:
      if (loads.empty()) fail("need at least one load factor");
  }
  for (double c : loads)
    if (!(c > 0.0)) fail("load factors must be positive");
}

std::vector<double> ExperimentSpec::sweep_points() const {
  std::vector<double> out;
  for (std::uint64_t i = 0;; ++i) {
    const double c = c_start + static_cast<double>(i) * c_step;
    if (c > c_end + c_step * 1e-6) break;
    out.push_back(c);
  }
  return out;
}

ExperimentReport run_threshold_sweep(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  std::vector<std::pair<double, double>> data;
  for (double c : spec.sweep_points()) {
    report.points.push_back(offline_point(spec, c));
    data.emplace_back(c, report.points.back().stats.lambda);
  }
  try {
    report.fit = fit_sigmoid(data);
  } catch (const FitRefused& refused) {
    report.fit_error = refused.what();
  }
  return report;
}

ExperimentReport run_offline_frac(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  for (double c : spec.loads) report.points.push_back(offline_point(spec, c));
  return report;
}

ExperimentReport run_randomwalk(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  std::uint32_t failures = 0;
  std::uint64_t trials = 0;
  for (double c : spec.loads) {
    report.points.push_back(walk_point(spec, c, spec.walk));
    failures += report.points.back().stats.failures;
    trials += report.points.back().stats.trials;
  }
  if (failures == 0 && spec.hypothesis_p > 0.0 && spec.hypothesis_p < 1.0)
    report.significance = significance_bound(trials / spec.loads.size(), spec.hypothesis_p);
  return report;
}

ExperimentReport run_bias_sweep(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  for (double a : spec.a_grid) {
    WalkParams walk = spec.walk;
    walk.a_bias = a;
    report.points.push_back(walk_point(spec, spec.loads.front(), walk));
  }
  return report;
}

ExperimentReport run_smallpages(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  const double ell = spec.config.ell;
  for (double normalized : spec.loads) {
    const auto start = Clock::now();
    PointReport point;
    point.config = with_load(spec.config, normalized * ell);
    point.walk = kOfflineWalk;
    point.load = normalized;
    auto outcomes = run_offline_trials(point.config, spec.seed_base, spec.trials, spec.schedule);
    for (auto& o : outcomes) o.alpha_p /= ell;
    point.stats = aggregate(outcomes);
    fill_requests(point, spec.filter_hashes);
    point.seconds = seconds_since(start);
    report.points.push_back(std::move(point));
  }
  return report;
}

DynamicsTrial run_dynamics_trial(const Config& config, const WalkParams& walk,
                                 std::uint64_t phase2_pairs, bool verify_every_op,
                                 std::uint32_t seed) {
  Rng rng(seed);
  CuckooGraph graph = generate(config, rng);
  ChoiceStore keys = std::move(graph.keys);
  const std::uint32_t n = config.keys();
  PagedTable table(config, keys, walk, n);

  DynamicsTrial trial;
  DynamicsSummary& summary = trial.summary;
  summary.window = std::max<std::uint32_t>(1, n / 100);
  summary.operations = n + 2 * phase2_pairs;
  summary.load_at_one_percent_backup = std::numeric_limits<double>::quiet_NaN();

  std::vector<std::uint64_t> recent(summary.window, 0);
  std::uint64_t recent_sum = 0;
  std::uint64_t inserts = 0;
  std::vector<KeyId> live;
  std::vector<std::uint32_t> live_index;
  live.reserve(n);

  auto verify = [&] {
    if (!verify_every_op) return;
    ++summary.legality_checks;
    if (!table.check_legal()) throw std::logic_error("dynamics: table became illegal");
  };
  auto note_insert = [&](KeyId key, std::uint64_t steps, int phase) {
    if (key >= live_index.size()) live_index.resize(key + 1, 0);
    live_index[key] = static_cast<std::uint32_t>(live.size());
    live.push_back(key);
    const std::size_t slot = inserts % summary.window;
    recent_sum += steps - recent[slot];
    recent[slot] = steps;
    ++inserts;
    if (inserts % summary.window == 0) {
      const double live_keys = table.live_keys();
      trial.series.push_back({inserts, phase, live_keys / config.m,
                              live_keys ? table.primary_keys() / live_keys : 1.0,
                              live_keys ? table.backup_keys() / live_keys : 0.0,
                              static_cast<double>(recent_sum) / summary.window});
    }
  };

  for (KeyId key = 0; key < n; ++key) {
    const InsertResult result = table.insert(key, rng);
    verify();
    if (!result.success) {
      trial.failed = true;
      return trial;
    }
    note_insert(key, result.steps, 1);
    if (std::isnan(summary.load_at_one_percent_backup) &&
        table.backup_keys() > 0.01 * table.live_keys())
      summary.load_at_one_percent_backup = static_cast<double>(table.live_keys()) / config.m;
  }
  if (std::isnan(summary.load_at_one_percent_backup))
    summary.load_at_one_percent_backup = static_cast<double>(table.live_keys()) / config.m;
  const std::uint64_t phase1_steps = table.total_steps();
  summary.phase1_steps_mean = n ? static_cast<double>(phase1_steps) / n : 0.0;
  summary.phase1_final_steps_window =
      static_cast<double>(recent_sum) / std::min<std::uint64_t>(summary.window, std::max(n, 1u));
  summary.phase1_final_r_p =
      table.live_keys() ? static_cast<double>(table.primary_keys()) / table.live_keys() : 1.0;
  summary.w_frequency_phase1 = frequencies({table.backup_per_page()});

  WalkParams unbounded = walk;
  unbounded.b_factor = std::numeric_limits<double>::infinity();
  table.set_walk(unbounded);

  std::uint64_t late_steps = 0;
  std::uint64_t late_count = 0;
  double late_rp_sum = 0.0;
  for (std::uint64_t pair = 0; pair < phase2_pairs && !live.empty(); ++pair) {
    const std::uint32_t index = rng.uniform_below(static_cast<std::uint32_t>(live.size()));
    const KeyId victim = live[index];
    if (!table.erase(victim)) throw std::logic_error("dynamics: live key missing from table");
    live[index] = live.back();
    live_index[live[index]] = index;
    live.pop_back();
    verify();

    const KeyId fresh = keys.draw(config, rng);
    const InsertResult result = table.insert(fresh, rng);
    verify();
    note_insert(fresh, result.steps, 2);
    if (2 * pair >= phase2_pairs) {
      late_steps += result.steps;
      ++late_count;
      late_rp_sum += static_cast<double>(table.primary_keys()) / table.live_keys();
    }
  }
  if (phase2_pairs > 0) {
    summary.phase2_steps_mean =
        static_cast<double>(table.total_steps() - phase1_steps) / static_cast<double>(phase2_pairs);
    summary.phase2_late_steps_mean = late_count ? static_cast<double>(late_steps) / late_count : 0.0;
    summary.phase2_late_r_p_mean = late_count ? late_rp_sum / late_count : 0.0;
  }
  summary.phase2_final_r_p =
      table.live_keys() ? static_cast<double>(table.primary_keys()) / table.live_keys() : 1.0;
  summary.w_frequency_phase2 = frequencies({table.backup_per_page()});
  return trial;
}

ExperimentReport run_dynamics(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  const auto start = Clock::now();
  const Config config = with_load(spec.config, spec.loads.front());
  const auto pairs =
      static_cast<std::uint64_t>(std::llround(spec.phase2_multiple * config.keys()));

  std::vector<DynamicsTrial> trials(spec.trials);
  for_each_trial(trials, spec.schedule, [&](std::uint32_t i) {
    return run_dynamics_trial(config, spec.walk, pairs, spec.verify_every_op,
                              trial_seed(spec.seed_base, i));
  });

  PointReport point;
  point.config = config;
  point.walk = spec.walk;
  point.load = config.c;
  point.stats.trials = spec.trials;

  DynamicsSummary mean;
  std::uint32_t ok = 0;
  std::vector<DynamicsSample> series;
  std::vector<std::vector<double>> w1, w2;
  for (const auto& trial : trials) {
    if (trial.failed) {
      ++point.stats.failures;
      continue;
    }
    const DynamicsSummary& s = trial.summary;
    if (ok == 0) {
      series = trial.series;
      mean = s;
    } else {
      for (std::size_t i = 0; i < series.size() && i < trial.series.size(); ++i) {
        series[i].r_p += trial.series[i].r_p;
        series[i].load += trial.series[i].load;
        series[i].backup_fraction += trial.series[i].backup_fraction;
        series[i].steps_window += trial.series[i].steps_window;
      }
      mean.legality_checks += s.legality_checks;
      mean.phase1_steps_mean += s.phase1_steps_mean;
      mean.phase1_final_steps_window += s.phase1_final_steps_window;
      mean.phase2_steps_mean += s.phase2_steps_mean;
      mean.phase2_late_steps_mean += s.phase2_late_steps_mean;
      mean.phase1_final_r_p += s.phase1_final_r_p;
      mean.phase2_final_r_p += s.phase2_final_r_p;
      mean.phase2_late_r_p_mean += s.phase2_late_r_p_mean;
      mean.load_at_one_percent_backup += s.load_at_one_percent_backup;
    }
    ++ok;
  }
  if (ok > 0) {
    const double k = ok;
    for (auto& sample : series) {
      sample.r_p /= k;
      sample.load /= k;
      sample.backup_fraction /= k;
      sample.steps_window /= k;
    }
    mean.phase1_steps_mean /= k;
    mean.phase1_final_steps_window /= k;
    mean.phase2_steps_mean /= k;
    mean.phase2_late_steps_mean /= k;
    mean.phase1_final_r_p /= k;
    mean.phase2_final_r_p /= k;
    mean.phase2_late_r_p_mean /= k;
    mean.load_at_one_percent_backup /= k;
    // Pool per-trial histograms weighted equally (every trial has t pages).
    std::size_t width = 0;
    for (const auto& trial : trials)
      if (!trial.failed)
        width = std::max({width, trial.summary.w_frequency_phase1.size(),
                          trial.summary.w_frequency_phase2.size()});
    mean.w_frequency_phase1.assign(width, 0.0);
    mean.w_frequency_phase2.assign(width, 0.0);
    for (const auto& trial : trials) {
      if (trial.failed) continue;
      for (std::size_t w = 0; w < trial.summary.w_frequency_phase1.size(); ++w)
        mean.w_frequency_phase1[w] += trial.summary.w_frequency_phase1[w] / k;
      for (std::size_t w = 0; w < trial.summary.w_frequency_phase2.size(); ++w)
        mean.w_frequency_phase2[w] += trial.summary.w_frequency_phase2[w] / k;
    }
    point.stats.r_p.mean = mean.phase1_final_r_p;
    point.stats.steps.mean = mean.phase1_steps_mean;
    point.stats.w_frequency = mean.w_frequency_phase1;
  }
  point.stats.lambda = static_cast<double>(point.stats.failures) / point.stats.trials;
  point.seconds = seconds_since(start);
  report.points.push_back(std::move(point));
  report.series = std::move(series);
  if (ok > 0) report.dynamics = std::move(mean);
  return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::kThresholdSweep: return run_threshold_sweep(spec);
    case ExperimentKind::kOfflineFrac: return run_offline_frac(spec);
    case ExperimentKind::kRandomWalk: return run_randomwalk(spec);
    case ExperimentKind::kBiasSweep: return run_bias_sweep(spec);
    case ExperimentKind::kDynamics: return run_dynamics(spec);
    case ExperimentKind::kSmallPages: return run_smallpages(spec);
  }
  throw std::invalid_argument("unknown experiment kind");
}

}  // namespace cuckoo_paging
