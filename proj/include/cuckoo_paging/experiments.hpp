#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cuckoo_paging/analysis.hpp"
#include "cuckoo_paging/graph.hpp"
#include "cuckoo_paging/paged_table.hpp"
#include "cuckoo_paging/trials.hpp"

namespace cuckoo_paging {

enum class ExperimentKind {
  kThresholdSweep,
  kOfflineFrac,
  kRandomWalk,
  kBiasSweep,
  kDynamics,
  kSmallPages,
};

std::string_view kind_name(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kOfflineFrac;
  // config.c is ignored; load factors come from `loads` or the sweep range.
  // For kSmallPages loads are normalized (c / ell).
  Config config;
  WalkParams walk;
  std::vector<double> loads;
  double c_start = 0.0;
  double c_end = 0.0;
  double c_step = 1e-4;
  std::vector<double> a_grid;  // kBiasSweep
  std::uint32_t trials = 30;
  std::uint32_t seed_base = 1;
  Schedule schedule = Schedule::kParallel;

  // Per-page filters used for the unsuccessful-search estimate.
  std::uint32_t filter_hashes = 3;
  // Hypothesized failure probability for the significance statement.
  double hypothesis_p = 1e-5;

  // kDynamics: phase-2 delete/insert pairs = round(phase2_multiple * n).
  double phase2_multiple = 1.0;
  bool verify_every_op = false;

  // Throws std::invalid_argument when the spec cannot be run.
  void validate() const;
  // Sweep points c_start + i * c_step <= c_end.
  std::vector<double> sweep_points() const;
};

struct PointReport {
  Config config;  // with the point's c (keys per cell)
  WalkParams walk;
  double load = 0.0;  // c, or c / ell for small pages
  TrialStats stats;
  double seconds = 0.0;
  double successful_requests = 0.0;    // E(X), successful search
  double unsuccessful_requests = 0.0;  // E(X), unsuccessful search with filters
};

struct DynamicsSample {
  std::uint64_t insert_index = 0;  // insert operations so far, both phases
  int phase = 1;
  double load = 0.0;
  double r_p = 0.0;
  double backup_fraction = 0.0;
  double steps_window = 0.0;  // mean steps of the last `window` inserts
};

struct DynamicsSummary {
  std::uint32_t window = 1;
  std::uint64_t operations = 0;  // inserts plus deletes, per trial
  std::uint64_t legality_checks = 0;
  double phase1_steps_mean = 0.0;        // #st over phase 1
  double phase1_final_steps_window = 0.0;  // #st_key at the end of phase 1
  double phase2_steps_mean = 0.0;
  double phase2_late_steps_mean = 0.0;  // second half of phase 2
  double phase1_final_r_p = 0.0;
  double phase2_final_r_p = 0.0;
  double phase2_late_r_p_mean = 0.0;
  double load_at_one_percent_backup = 0.0;  // first load where backup share > 1%
  std::vector<double> w_frequency_phase1;
  std::vector<double> w_frequency_phase2;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<PointReport> points;
  std::optional<SigmoidFit> fit;
  std::string fit_error;
  std::optional<SignificanceBound> significance;
  std::vector<DynamicsSample> series;
  std::optional<DynamicsSummary> dynamics;
};

ExperimentReport run_threshold_sweep(const ExperimentSpec& spec);
ExperimentReport run_offline_frac(const ExperimentSpec& spec);
ExperimentReport run_randomwalk(const ExperimentSpec& spec);
ExperimentReport run_bias_sweep(const ExperimentSpec& spec);
ExperimentReport run_dynamics(const ExperimentSpec& spec);
ExperimentReport run_smallpages(const ExperimentSpec& spec);

ExperimentReport run_experiment(const ExperimentSpec& spec);

// Phase 1 inserts n keys with `walk`; phase 2 alternates deleting a uniformly
// random live key and inserting a fresh one with an unbounded budget.
struct DynamicsTrial {
  bool failed = false;
  std::vector<DynamicsSample> series;
  DynamicsSummary summary;
};
DynamicsTrial run_dynamics_trial(const Config& config, const WalkParams& walk,
                                 std::uint64_t phase2_pairs, bool verify_every_op,
                                 std::uint32_t seed);

}  // namespace cuckoo_paging
