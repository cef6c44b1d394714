// Experiment drivers for cuckoo hashing with pages.
#include <omp.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cuckoo_paging/experiments.hpp"
#include "cuckoo_paging/report.hpp"

namespace {

using namespace cuckoo_paging;

struct Options {
  std::vector<double> loads;
  double c_start = 0.975;
  double c_end = 0.979;
  double c_step = 1e-4;
  std::uint32_t m = 100000;
  std::uint32_t s = 1000;
  std::uint32_t kp = 3;
  std::uint32_t kb = 1;
  std::uint32_t ell = 1;
  std::vector<double> a_bias;
  std::string b_factor = "inf";
  std::uint32_t trials = 30;
  std::uint32_t seed = 1;
  std::string out;
  std::string format = "csv";
  bool serial = false;
  int threads = 0;
  std::uint32_t hashes = 3;
  double hypothesis_p = 1e-5;
  double phase2_multiple = 1.0;
  bool verify = false;
};

double parse_budget(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad --b-factor value: " + text);
  return value;
}

void add_common(CLI::App* cmd, Options& o, bool sweep) {
  if (sweep) {
    cmd->add_option("--c-start", o.c_start, "first load factor of the sweep");
    cmd->add_option("--c-end", o.c_end, "last load factor of the sweep");
    cmd->add_option("--c-step", o.c_step, "sweep step");
  } else {
    cmd->add_option("--c", o.loads, "load factor(s); repeat or list for several points");
  }
  cmd->add_option("--m", o.m, "total number of cells");
  cmd->add_option("--s", o.s, "page size in cells");
  cmd->add_option("--kp", o.kp, "choices on the primary page");
  cmd->add_option("--kb", o.kb, "choices on the backup page");
  cmd->add_option("--ell", o.ell, "cell capacity");
  cmd->add_option("--a-bias", o.a_bias, "walk coin bias (a list for bias-sweep)");
  cmd->add_option("--b-factor", o.b_factor, "step budget factor, or inf");
  cmd->add_option("--trials", o.trials, "trials per point");
  cmd->add_option("--seed", o.seed, "seed base; trial i uses seed + i");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--serial", o.serial, "run trials with the serial reference loop");
  cmd->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)");
  cmd->add_option("--hashes", o.hashes, "hash functions of the per-page filters");
  cmd->add_option("--hypothesis-p", o.hypothesis_p, "failure probability for the significance bound");
}

ExperimentSpec build_spec(ExperimentKind kind, const Options& o) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.config = Config{0.0, o.m, o.s, o.kp, o.kb, o.ell};
  spec.walk.b_factor = parse_budget(o.b_factor);
  spec.loads = o.loads;
  spec.c_start = o.c_start;
  spec.c_end = o.c_end;
  spec.c_step = o.c_step;
  spec.trials = o.trials;
  spec.seed_base = o.seed;
  spec.schedule = o.serial ? Schedule::kSerial : Schedule::kParallel;
  spec.filter_hashes = o.hashes;
  spec.hypothesis_p = o.hypothesis_p;
  spec.phase2_multiple = o.phase2_multiple;
  spec.verify_every_op = o.verify;
  if (kind == ExperimentKind::kBiasSweep) {
    spec.a_grid = o.a_bias;
    if (spec.a_grid.empty())
      for (int i = 70; i <= 99; ++i) spec.a_grid.push_back(i / 100.0);
  } else if (!o.a_bias.empty()) {
    if (o.a_bias.size() != 1) throw std::invalid_argument("--a-bias takes one value here");
    spec.walk.a_bias = o.a_bias.front();
  }
  if (spec.loads.empty() && kind != ExperimentKind::kThresholdSweep) spec.loads = {0.95};
  return spec;
}

int emit(const ExperimentReport& report, const Options& o) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      std::cerr << "error: cannot open " << o.out << '\n';
      return 3;
    }
    out = &file;
  }
  if (o.format == "json") {
    *out << to_json(report).dump(2) << '\n';
  } else {
    write_csv(*out, report);
    if (report.spec.kind == ExperimentKind::kThresholdSweep) {
      if (o.out.empty()) {
        std::cerr << fit_sidecar(report).dump() << '\n';
      } else {
        std::ofstream sidecar(o.out + ".fit.json");
        if (!sidecar) {
          std::cerr << "error: cannot open " << o.out << ".fit.json\n";
          return 3;
        }
        sidecar << fit_sidecar(report).dump(2) << '\n';
      }
    }
  }
  out->flush();
  if (!*out) {
    std::cerr << "error: write failed\n";
    return 3;
  }
  if (!report.fit_error.empty()) std::cerr << "fit refused: " << report.fit_error << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cuckoo hashing with pages: experiment drivers"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    ExperimentKind kind;
  };
  const Command commands[] = {
      {"threshold", "failure-rate sweep over c with sigmoid fit (offline solver)",
       ExperimentKind::kThresholdSweep},
      {"offline", "optimal placements: r_p, alpha_p, w distribution", ExperimentKind::kOfflineFrac},
      {"randomwalk", "online random-walk insertion runs", ExperimentKind::kRandomWalk},
      {"bias-sweep", "random walk over a grid of coin biases", ExperimentKind::kBiasSweep},
      {"dynamics", "insertion phase followed by alternating deletes and inserts",
       ExperimentKind::kDynamics},
      {"smallpages", "pages of one capacity-ell cell, k_p = k_b = 1 (--c is c/ell)",
       ExperimentKind::kSmallPages},
  };
  std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub, o, cmd.kind == ExperimentKind::kThresholdSweep);
    if (cmd.kind == ExperimentKind::kDynamics) {
      sub->add_option("--phase2-multiple", o.phase2_multiple,
                      "delete/insert pairs in phase 2, as a multiple of n");
      sub->add_flag("--verify", o.verify, "check table legality after every operation");
    }
    subs.emplace_back(sub, cmd.kind);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (o.threads > 0) omp_set_num_threads(o.threads);
    for (const auto& [sub, kind] : subs) {
      if (!sub->parsed()) continue;
      if (kind == ExperimentKind::kSmallPages && sub->count("--s") == 0) o.s = 1;
      if (kind == ExperimentKind::kSmallPages && sub->count("--kp") == 0) o.kp = 1;
      if (kind == ExperimentKind::kSmallPages && sub->count("--ell") == 0) o.ell = 10;
      const ExperimentReport report = run_experiment(build_spec(kind, o));
      return emit(report, o);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
