#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cuckoo_paging/analysis.hpp"
#include "doctest.h"

using namespace cuckoo_paging;

namespace {

// Term-by-term summation in long double.
double naive_poisson(double c, std::uint32_t s, std::uint32_t t, std::uint32_t ell) {
  const long double mean = static_cast<long double>(c) * s;
  long double term = std::exp(-mean), cdf = 0;
  for (std::uint32_t i = 0; i <= s * ell; ++i) {
    cdf += term;
    term *= mean / (i + 1);
  }
  return static_cast<double>(std::pow(cdf, static_cast<long double>(t)));
}

std::vector<std::pair<double, double>> exact_points(double x, double y, int count) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < count; ++i) {
    const double c = x - 6 * y + 12 * y * i / (count - 1);
    pts.emplace_back(c, sigmoid(c, x, y));
  }
  return pts;
}

TrialOutcome outcome(bool failed, double rp, double st, std::vector<std::uint32_t> w = {}) {
  TrialOutcome o;
  o.failed = failed;
  o.r_p = rp;
  o.alpha_p = rp * 0.9;
  o.steps = st;
  o.page_requests = 1.0 + st / 10;
  o.w = std::move(w);
  return o;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("poisson estimate") {
    CHECK(poisson_success_estimate(0.5, 1, 1) == doctest::Approx(std::exp(-0.5) * 1.5).epsilon(1e-12));
    CHECK(poisson_success_estimate(0.5, 1, 1) == doctest::Approx(0.90980).epsilon(1e-5));
    for (double c : {0.3, 0.8, 0.95, 1.2})
      for (std::uint32_t s : {1u, 10u, 100u})
        for (std::uint32_t t : {1u, 7u, 50u})
          for (std::uint32_t ell : {1u, 2u, 4u})
            REQUIRE(poisson_success_estimate(c, s, t, ell) ==
                    doctest::Approx(naive_poisson(c, s, t, ell)).epsilon(1e-9));
  }

  TEST_CASE("poisson estimate is monotone") {
    for (std::uint32_t s : {10u, 100u, 1000u}) {
      double prev = 1.0;
      for (double c = 0.5; c <= 1.0; c += 0.01) {
        const double v = poisson_success_estimate(c, s, 1000);
        REQUIRE(v <= prev);
        prev = v;
      }
      prev = 1.0;
      for (std::uint32_t t = 1; t <= 100000; t *= 10) {
        const double v = poisson_success_estimate(0.9, s, t);
        REQUIRE(v <= prev);
        prev = v;
      }
    }
    CHECK(poisson_success_estimate(0.95, 100, 100000) < 1e-10);
    CHECK(poisson_success_estimate(0.5, 1000, 100000) > 0.99);
  }

  TEST_CASE("sigmoid fit recovers exact data") {
    for (double x : {0.6, 0.7, 0.85, 0.95, 0.99})
      for (double y : {5e-4, 2e-3, 0.01, 0.05}) {
        const SigmoidFit fit = fit_sigmoid(exact_points(x, y, 41));
        REQUIRE(std::abs(fit.x - x) < 1e-6);
        REQUIRE(std::abs(fit.y - y) < 1e-6);
        REQUIRE(fit.sum_res < 1e-12);
      }
  }

  TEST_CASE("sigmoid fit ignores input order") {
    auto pts = exact_points(0.95, 0.002, 41);
    for (auto& p : pts) p.second = std::clamp(p.second + 0.05 * std::sin(p.first * 1e4), 0.0, 1.0);
    const SigmoidFit ref = fit_sigmoid(pts);
    std::mt19937 engine(3);
    for (int i = 0; i < 5; ++i) {
      std::shuffle(pts.begin(), pts.end(), engine);
      CHECK(std::abs(fit_sigmoid(pts).x - ref.x) < 1e-12);
    }
  }

  TEST_CASE("sigmoid fit refusals") {
    std::vector<std::pair<double, double>> zeros{{0.9, 0}, {0.91, 0}, {0.92, 0}, {0.93, 0}};
    CHECK_THROWS_AS(fit_sigmoid(zeros), FitRefused);
    std::vector<std::pair<double, double>> ones{{0.9, 1}, {0.91, 1}, {0.92, 1}, {0.93, 1}};
    CHECK_THROWS_AS(fit_sigmoid(ones), FitRefused);
    std::vector<std::pair<double, double>> few{{0.9, 0}, {0.91, 1}, {0.92, 1}};
    CHECK_THROWS_AS(fit_sigmoid(few), FitRefused);
  }

  TEST_CASE("significance bound") {
    const auto b = significance_bound(1000000, 1e-5);
    CHECK(b.bound == doctest::Approx(4.54e-5).epsilon(1e-3));
    CHECK(b.bound == doctest::Approx(std::exp(-10.0)));
    CHECK(significance_bound(1, 0.25).exact == doctest::Approx(0.75));
    CHECK(significance_bound(100, 1e-15).bound == doctest::Approx(1.0));
    for (std::uint64_t a : {1ull, 10ull, 1000ull, 1000000ull})
      for (double p : {1e-7, 1e-5, 0.01, 0.5, 0.9})
        REQUIRE(significance_bound(a, p).exact <= significance_bound(a, p).bound);
  }

  TEST_CASE("expected page requests") {
    CHECK(expected_page_requests(1.0) == 1.0);
    CHECK(expected_page_requests(0.0) == 2.0);
    CHECK(expected_page_requests(0.75) == doctest::Approx(1.25));
    CHECK(expected_page_requests(0.974) < 1.03);
    double prev = 2.0;
    for (double r = 0.0; r <= 1.0; r += 0.05) {
      const double e = expected_page_requests(r);
      REQUIRE(e <= prev);
      REQUIRE(e >= 1.0);
      prev = e;
    }
  }

  TEST_CASE("unsuccessful search requests") {
    const std::vector<double> empty{1.0};
    CHECK(unsuccessful_search_requests(empty, 3, 1000, 3) == 1.0);
    std::vector<double> half(11, 0.0);
    half[0] = 0.5;
    half[10] = 0.5;
    CHECK(unsuccessful_search_requests(half, 3, 1000, 3) ==
          doctest::Approx(1.0 + 0.5 * std::pow(0.03, 3)));
    std::vector<double> saturated(600, 0.0);
    saturated[500] = 1.0;
    CHECK(unsuccessful_search_requests(saturated, 3, 1000, 3) == doctest::Approx(2.0));
    const std::vector<double> bad{0.5};
    CHECK_THROWS_AS(unsuccessful_search_requests(bad, 3, 1000, 3), std::invalid_argument);
  }

  TEST_CASE("aggregate") {
    const std::vector<TrialOutcome> one{outcome(false, 0.97, 16.0, {0, 2})};
    const TrialStats single = aggregate(one);
    CHECK(single.lambda == 0.0);
    CHECK(single.r_p.mean == doctest::Approx(0.97));
    CHECK(single.r_p.var == 0.0);
    CHECK(single.steps.var == 0.0);

    const std::vector<TrialOutcome> two{outcome(false, 0.9, 10.0, {0, 1}), outcome(true, 0.1, 99.0)};
    const TrialStats half = aggregate(two);
    CHECK(half.lambda == 0.5);
    CHECK(half.failures == 1);
    CHECK(half.r_p.mean == doctest::Approx(0.9));

    const std::vector<TrialOutcome> three{outcome(false, 0.9, 10.0, {0, 0, 3}),
                                          outcome(false, 0.92, 14.0, {0, 1, 1}),
                                          outcome(false, 0.94, 21.0, {2, 0, 0})};
    const TrialStats s = aggregate(three);
    CHECK(s.r_p.mean == doctest::Approx(0.92));
    CHECK(s.r_p.var == doctest::Approx(0.0004));
    CHECK(s.steps.mean == doctest::Approx(15.0));
    CHECK(s.steps.var == doctest::Approx(31.0));
    REQUIRE(s.w_frequency.size() == 4);
    CHECK(s.w_zero_frequency() == doctest::Approx(5.0 / 9));
    CHECK(s.w_frequency[1] == doctest::Approx(2.0 / 9));
    CHECK(s.w_frequency[2] == doctest::Approx(1.0 / 9));
    CHECK(s.w_frequency[3] == doctest::Approx(1.0 / 9));
    CHECK(s.w_tail_frequency(1.5) == doctest::Approx(2.0 / 9));
    CHECK(s.w_mean_all_pages == doctest::Approx(7.0 / 9));
    CHECK(s.w_mean_loaded_pages == doctest::Approx(7.0 / 4));

    const std::vector<TrialOutcome> failed{outcome(true, 0.5, 1.0)};
    const TrialStats none = aggregate(failed);
    CHECK(none.lambda == 1.0);
    CHECK(none.r_p.mean == 0.0);
    CHECK(std::isfinite(none.steps.mean));

    CHECK_THROWS_AS(aggregate(std::vector<TrialOutcome>{}), std::invalid_argument);
  }

  TEST_CASE("reference thresholds") {
    CHECK(thresholds::kC3 == 0.917935);
    CHECK(thresholds::kC4 == 0.976770);
    CHECK(std::size(thresholds::kTwoChoiceNormalized) == 7);
  }
}
