#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cuckoo_paging {

// Load thresholds of standard cuckoo hashing, used as reference constants.
namespace thresholds {
inline constexpr double kC3 = 0.917935;  // 3-ary, ell = 1
inline constexpr double kC4 = 0.976770;  // 4-ary, ell = 1
// c*_{2,ell} / ell for two choices and cell capacity ell.
inline constexpr std::pair<std::uint32_t, double> kTwoChoiceNormalized[] = {
    {2, 0.897012}, {3, 0.959154}, {4, 0.980370},  {5, 0.989551},
    {8, 0.997853}, {10, 0.999143}, {16, 0.999928},
};
}  // namespace thresholds

// Pr(Po(c*s) <= s*ell)^t: the chance that no page of s cells (capacity ell
// each) receives more keys than it can hold. ell > 1 extends the ell = 1 form.
double poisson_success_estimate(double c, std::uint32_t s, std::uint32_t t,
                                std::uint32_t ell = 1);

// Logistic f(c; x, y) = 1 / (1 + exp(-(c - x) / y)).
double sigmoid(double c, double x, double y);

struct SigmoidFit {
  double x = 0.0;  // inflection point
  double y = 0.0;  // slope scale
  double sum_res = 0.0;
  std::uint32_t iterations = 0;
  std::vector<std::pair<double, double>> points;
};

class FitRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least-squares fit by damped Gauss-Newton. Points are sorted by c first, so
// the result does not depend on input order. Throws FitRefused with fewer
// than four points or when no lambda lies on each side of 0.5.
SigmoidFit fit_sigmoid(std::vector<std::pair<double, double>> points);

struct SignificanceBound {
  double exact = 0.0;  // (1 - p)^a
  double bound = 0.0;  // exp(-p a)
};

// Probability that a trials all succeed when each fails with probability p.
SignificanceBound significance_bound(std::uint64_t trials, double p);

// Successful search, primary page probed first: r_p * 1 + (1 - r_p) * 2.
double expected_page_requests(double r_p);

// Unsuccessful search with per-page filters: 1 + sum_w freq(w) min(1, kp w/s)^h.
// `w_frequency[w]` is the relative frequency of value w.
double unsuccessful_search_requests(std::span<const double> w_frequency, std::uint32_t kp,
                                    std::uint32_t s, std::uint32_t hashes);

struct TrialOutcome {
  bool failed = false;
  double r_p = 0.0;
  double alpha_p = 0.0;
  double steps = 0.0;          // #st, mean basic steps per inserted key
  double page_requests = 0.0;  // #pr
  std::vector<std::uint32_t> w;  // per page
};

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // unbiased; 0 for fewer than two samples
};

struct TrialStats {
  std::uint32_t trials = 0;
  std::uint32_t failures = 0;
  double lambda = 0.0;
  MeanVar r_p;
  MeanVar alpha_p;
  MeanVar steps;
  MeanVar page_requests;
  std::vector<double> w_frequency;  // index w; pooled over pages of successful trials
  double w_mean_all_pages = 0.0;
  double w_mean_loaded_pages = 0.0;  // pages with w > 0 only

  double w_zero_frequency() const { return w_frequency.empty() ? 0.0 : w_frequency[0]; }
  // Relative frequency of w > threshold.
  double w_tail_frequency(double threshold) const;
};

// Means and variances over successful trials, in trial-index order. Throws
// std::invalid_argument on an empty input.
TrialStats aggregate(std::span<const TrialOutcome> outcomes);

}  // namespace cuckoo_paging
