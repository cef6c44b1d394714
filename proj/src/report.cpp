#include "cuckoo_paging/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace cuckoo_paging {

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

namespace {

void write_stats_row(std::ostream& out, const PointReport& p) {
  const Config& c = p.config;
  const TrialStats& s = p.stats;
  out << format_number(p.load) << ',' << c.s << ',' << c.m << ',' << c.kp << ',' << c.kb << ','
      << c.ell << ',' << format_number(p.walk.a_bias) << ',' << format_number(p.walk.b_factor)
      << ',' << s.trials << ',' << format_number(s.lambda) << ',' << format_number(s.r_p.mean)
      << ',' << format_number(s.alpha_p.mean) << ',' << format_number(s.steps.mean) << ','
      << format_number(s.steps.var) << ',' << format_number(s.page_requests.mean) << ','
      << format_number(s.page_requests.var) << '\n';
}

nlohmann::json config_json(const Config& c) {
  return {{"c", c.c}, {"m", c.m}, {"s", c.s}, {"kp", c.kp}, {"kb", c.kb}, {"ell", c.ell}};
}

nlohmann::json number(double value) {
  if (std::isfinite(value)) return value;
  return format_number(value);
}

}  // namespace

void write_csv(std::ostream& out, const ExperimentReport& report) {
  switch (report.spec.kind) {
    case ExperimentKind::kThresholdSweep:
      out << "c,trials,failures,lambda\n";
      for (const auto& p : report.points)
        out << format_number(p.load) << ',' << p.stats.trials << ',' << p.stats.failures << ','
            << format_number(p.stats.lambda) << '\n';
      return;
    case ExperimentKind::kDynamics:
      out << "insert_index,phase,load,rp,backup_fraction,st_key_window\n";
      for (const auto& d : report.series)
        out << d.insert_index << ',' << d.phase << ',' << format_number(d.load) << ','
            << format_number(d.r_p) << ',' << format_number(d.backup_fraction) << ','
            << format_number(d.steps_window) << '\n';
      return;
    default:
      out << "c,s,m,kp,kb,ell,a_bias,b_factor,trials,lambda,rp_mean,alphap_mean,st_mean,st_var,"
             "pr_mean,pr_var\n";
      for (const auto& p : report.points) write_stats_row(out, p);
  }
}

nlohmann::json fit_sidecar(const ExperimentReport& report) {
  if (report.fit) return {{"x", report.fit->x}, {"y", report.fit->y}, {"sum_res", report.fit->sum_res}};
  return {{"error", report.fit_error}};
}

nlohmann::json to_json(const ExperimentReport& report) {
  const ExperimentSpec& spec = report.spec;
  nlohmann::json j;
  j["kind"] = std::string(kind_name(spec.kind));
  j["spec"] = {{"config", config_json(spec.config)},
               {"a_bias", spec.walk.a_bias},
               {"b_factor", number(spec.walk.b_factor)},
               {"loads", spec.loads},
               {"c_start", spec.c_start},
               {"c_end", spec.c_end},
               {"c_step", spec.c_step},
               {"a_grid", spec.a_grid},
               {"trials", spec.trials},
               {"seed_base", spec.seed_base}};
  auto& points = j["points"] = nlohmann::json::array();
  for (const auto& p : report.points) {
    const TrialStats& s = p.stats;
    points.push_back({{"load", p.load},
                      {"config", config_json(p.config)},
                      {"a_bias", p.walk.a_bias},
                      {"b_factor", number(p.walk.b_factor)},
                      {"trials", s.trials},
                      {"failures", s.failures},
                      {"lambda", s.lambda},
                      {"rp_mean", s.r_p.mean},
                      {"rp_var", s.r_p.var},
                      {"alphap_mean", s.alpha_p.mean},
                      {"alphap_var", s.alpha_p.var},
                      {"st_mean", s.steps.mean},
                      {"st_var", s.steps.var},
                      {"pr_mean", s.page_requests.mean},
                      {"pr_var", s.page_requests.var},
                      {"w_frequency", s.w_frequency},
                      {"w_mean_all_pages", s.w_mean_all_pages},
                      {"w_mean_loaded_pages", s.w_mean_loaded_pages},
                      {"successful_search_requests", p.successful_requests},
                      {"unsuccessful_search_requests", p.unsuccessful_requests},
                      {"seconds", p.seconds}});
  }
  if (spec.kind == ExperimentKind::kThresholdSweep) j["fit"] = fit_sidecar(report);
  if (report.significance)
    j["significance"] = {{"p", spec.hypothesis_p},
                         {"exact", report.significance->exact},
                         {"bound", report.significance->bound},
                         {"confidence", 1.0 - report.significance->bound}};
  if (report.dynamics) {
    const DynamicsSummary& d = *report.dynamics;
    j["dynamics"] = {{"window", d.window},
                     {"operations", d.operations},
                     {"legality_checks", d.legality_checks},
                     {"phase1_steps_mean", d.phase1_steps_mean},
                     {"phase1_final_steps_window", d.phase1_final_steps_window},
                     {"phase2_steps_mean", d.phase2_steps_mean},
                     {"phase2_late_steps_mean", d.phase2_late_steps_mean},
                     {"phase1_final_rp", d.phase1_final_r_p},
                     {"phase2_final_rp", d.phase2_final_r_p},
                     {"phase2_late_rp_mean", d.phase2_late_r_p_mean},
                     {"load_at_one_percent_backup", d.load_at_one_percent_backup},
                     {"w_frequency_phase1", d.w_frequency_phase1},
                     {"w_frequency_phase2", d.w_frequency_phase2}};
  }
  return j;
}

}  // namespace cuckoo_paging
