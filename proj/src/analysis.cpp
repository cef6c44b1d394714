#include "cuckoo_paging/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cuckoo_paging {

double poisson_success_estimate(double c, std::uint32_t s, std::uint32_t t, std::uint32_t ell) {
  if (!(c > 0.0) || s == 0 || t == 0 || ell == 0)
    throw std::invalid_argument("poisson_success_estimate: need c > 0, s, t, ell >= 1");
  const double mean = c * static_cast<double>(s);
  const std::uint64_t cap = static_cast<std::uint64_t>(s) * ell;

  // Terms e^-mean mean^i / i! in log space via term_{i+1} = term_i mean/(i+1).
  double log_term = -mean;
  double log_lower = log_term;
  for (std::uint64_t i = 1; i <= cap; ++i) {
    log_term += std::log(mean / static_cast<double>(i));
    const double hi = std::max(log_lower, log_term);
    log_lower = hi + std::log1p(std::exp(-std::abs(log_lower - log_term)));
  }

  double log_page;
  if (log_lower > std::log(0.5)) {
    // Near 1: use the upper tail for precision, log(1 - Q) = log1p(-Q).
    double upper = 0.0;
    double lt = log_term;
    for (std::uint64_t i = cap + 1;; ++i) {
      lt += std::log(mean / static_cast<double>(i));
      const double term = std::exp(lt);
      upper += term;
      if (static_cast<double>(i) > mean && term <= upper * 1e-17) break;
      if (i > cap + 100000000ULL) break;
    }
    log_page = std::log1p(-std::min(upper, 1.0));
  } else {
    log_page = log_lower;
  }
  return std::exp(static_cast<double>(t) * log_page);
}

double sigmoid(double c, double x, double y) { return 1.0 / (1.0 + std::exp(-(c - x) / y)); }

namespace {

double residual_sum(const std::vector<std::pair<double, double>>& pts, double x, double y) {
  double total = 0.0;
  for (const auto& [c, lambda] : pts) {
    const double r = sigmoid(c, x, y) - lambda;
    total += r * r;
  }
  return total;
}

}  // namespace

SigmoidFit fit_sigmoid(std::vector<std::pair<double, double>> points) {
  if (points.size() < 4) throw FitRefused("sigmoid fit needs at least 4 points");
  std::sort(points.begin(), points.end());
  const bool below = std::any_of(points.begin(), points.end(), [](auto p) { return p.second < 0.5; });
  const bool above = std::any_of(points.begin(), points.end(), [](auto p) { return p.second > 0.5; });
  if (!below || !above)
    throw FitRefused("no transition in data: need failure rates on both sides of 0.5");

  double x = points.front().first;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& [c, lambda] : points) {
    if (std::abs(lambda - 0.5) < best_gap) {
      best_gap = std::abs(lambda - 0.5);
      x = c;
    }
  }
  double y = (points.back().first - points.front().first) / 10.0;
  if (!(y > 0.0)) throw FitRefused("sigmoid fit needs distinct load factors");

  SigmoidFit fit;
  double sse = residual_sum(points, x, y);
  double damping = 1.0;
  constexpr std::uint32_t kMaxIterations = 10000;
  constexpr double kTolerance = 1e-10;
  std::uint32_t it = 0;
  for (; it < kMaxIterations; ++it) {
    // Normal equations J^T J d = -J^T r for the two parameters.
    double jxx = 0, jxy = 0, jyy = 0, gx = 0, gy = 0;
    for (const auto& [c, lambda] : points) {
      const double f = sigmoid(c, x, y);
      const double df = f * (1.0 - f);
      const double dx = -df / y;
      const double dy = -df * (c - x) / (y * y);
      const double r = f - lambda;
      jxx += dx * dx;
      jxy += dx * dy;
      jyy += dy * dy;
      gx += dx * r;
      gy += dy * r;
    }
    const double det = jxx * jyy - jxy * jxy;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
    const double step_x = -(jyy * gx - jxy * gy) / det;
    const double step_y = -(jxx * gy - jxy * gx) / det;

    bool accepted = false;
    double change = 0.0;
    while (damping > 1e-30) {
      const double nx = x + damping * step_x;
      const double ny = y + damping * step_y;
      if (ny > 0.0 && std::isfinite(nx)) {
        const double nsse = residual_sum(points, nx, ny);
        if (nsse < sse) {
          change = std::max(std::abs(nx - x), std::abs(ny - y));
          x = nx;
          y = ny;
          sse = nsse;
          accepted = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!accepted) break;
    damping = std::min(1.0, damping * 2.0);
    if (change < kTolerance) {
      ++it;
      break;
    }
  }
  if (x < points.front().first - 0.05 || x > points.back().first + 0.05)
    throw FitRefused("sigmoid fit left the sweep range (inflection at " + std::to_string(x) + ")");
  fit.x = x;
  fit.y = y;
  fit.sum_res = sse;
  fit.iterations = it;
  fit.points = std::move(points);
  return fit;
}

SignificanceBound significance_bound(std::uint64_t trials, double p) {
  if (trials == 0 || !(p > 0.0 && p < 1.0))
    throw std::invalid_argument("significance_bound: need a >= 1 and 0 < p < 1");
  const double a = static_cast<double>(trials);
  return {std::exp(a * std::log1p(-p)), std::exp(-p * a)};
}

double expected_page_requests(double r_p) {
  if (!(r_p >= 0.0 && r_p <= 1.0)) throw std::invalid_argument("expected_page_requests: r_p in [0,1]");
  return r_p * 1.0 + (1.0 - r_p) * 2.0;
}

double unsuccessful_search_requests(std::span<const double> w_frequency, std::uint32_t kp,
                                    std::uint32_t s, std::uint32_t hashes) {
  if (s == 0) throw std::invalid_argument("unsuccessful_search_requests: s must be positive");
  double total = 0.0;
  double mass = 0.0;
  for (std::size_t w = 0; w < w_frequency.size(); ++w) {
    mass += w_frequency[w];
    const double fill = std::min(1.0, static_cast<double>(kp) * static_cast<double>(w) / s);
    total += w_frequency[w] * std::pow(fill, static_cast<double>(hashes));
  }
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument("unsuccessful_search_requests: histogram must sum to 1");
  return 1.0 + total;
}

double TrialStats::w_tail_frequency(double threshold) const {
  double tail = 0.0;
  for (std::size_t w = 0; w < w_frequency.size(); ++w)
    if (static_cast<double>(w) > threshold) tail += w_frequency[w];
  return tail;
}

namespace {

template <typename Get>
MeanVar mean_var(std::span<const TrialOutcome> outcomes, Get get) {
  MeanVar out;
  std::uint64_t count = 0;
  double sum = 0.0;
  for (const auto& o : outcomes)
    if (!o.failed) {
      sum += get(o);
      ++count;
    }
  if (count == 0) return out;
  out.mean = sum / static_cast<double>(count);
  if (count < 2) return out;
  double ss = 0.0;
  for (const auto& o : outcomes)
    if (!o.failed) ss += (get(o) - out.mean) * (get(o) - out.mean);
  out.var = ss / static_cast<double>(count - 1);
  return out;
}

}  // namespace

TrialStats aggregate(std::span<const TrialOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("aggregate: no trials");
  TrialStats stats;
  stats.trials = static_cast<std::uint32_t>(outcomes.size());
  for (const auto& o : outcomes) stats.failures += o.failed;
  stats.lambda = static_cast<double>(stats.failures) / stats.trials;
  stats.r_p = mean_var(outcomes, [](const TrialOutcome& o) { return o.r_p; });
  stats.alpha_p = mean_var(outcomes, [](const TrialOutcome& o) { return o.alpha_p; });
  stats.steps = mean_var(outcomes, [](const TrialOutcome& o) { return o.steps; });
  stats.page_requests = mean_var(outcomes, [](const TrialOutcome& o) { return o.page_requests; });

  std::vector<std::uint64_t> counts;
  std::uint64_t pages = 0;
  std::uint64_t loaded_pages = 0;
  double w_sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.failed) continue;
    for (std::uint32_t w : o.w) {
      if (w >= counts.size()) counts.resize(w + 1, 0);
      ++counts[w];
      ++pages;
      w_sum += w;
      loaded_pages += w > 0;
    }
  }
  if (pages > 0) {
    stats.w_frequency.resize(counts.size());
    for (std::size_t w = 0; w < counts.size(); ++w)
      stats.w_frequency[w] = static_cast<double>(counts[w]) / static_cast<double>(pages);
    stats.w_mean_all_pages = w_sum / static_cast<double>(pages);
    stats.w_mean_loaded_pages = loaded_pages ? w_sum / static_cast<double>(loaded_pages) : 0.0;
  }
  return stats;
}

}  // namespace cuckoo_paging
