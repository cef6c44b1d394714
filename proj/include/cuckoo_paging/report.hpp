#pragma once

#include <iosfwd>
#include <string>

#include "cuckoo_paging/experiments.hpp"
#include "json.hpp"

namespace cuckoo_paging {

// Fixed-format number used in every CSV cell ("inf" for infinity).
std::string format_number(double value);

// threshold -> `c,trials,failures,lambda`
// offline, randomwalk, bias-sweep, smallpages ->
//   `c,s,m,kp,kb,ell,a_bias,b_factor,trials,lambda,rp_mean,alphap_mean,st_mean,st_var,pr_mean,pr_var`
// dynamics -> `insert_index,phase,load,rp,backup_fraction,st_key_window`
void write_csv(std::ostream& out, const ExperimentReport& report);

// `{x, y, sum_res}` for a fitted sweep, `{error}` for a refused fit.
nlohmann::json fit_sidecar(const ExperimentReport& report);

// Full report including per-point timing (not reproducible byte-for-byte).
nlohmann::json to_json(const ExperimentReport& report);

}  // namespace cuckoo_paging
