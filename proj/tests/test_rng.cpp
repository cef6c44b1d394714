#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "cuckoo_paging/rng.hpp"
#include "doctest.h"

using namespace cuckoo_paging;

namespace {

// Straight restatement of the rejection rule on a raw engine.
std::uint32_t reference_below(std::mt19937& engine, std::uint32_t bound) {
  const std::uint64_t span = 1ull << 32;
  const std::uint64_t limit = span - span % bound;
  for (;;) {
    const std::uint64_t w = engine();
    if (w < limit) return static_cast<std::uint32_t>(w % bound);
  }
}

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("default seed matches the published MT19937 outputs") {
    Rng rng(5489);
    CHECK(rng.next_u32() == 3499211612u);
    for (int i = 2; i < 10000; ++i) rng.next_u32();
    CHECK(rng.next_u32() == 4123659995u);
  }

  TEST_CASE("equal seeds give equal streams") {
    Rng a(1), b(1);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u32() == b.next_u32());
    CHECK(Rng(1).next_u32() != Rng(2).next_u32());
  }

  TEST_CASE("uniform_below follows the rejection rule") {
    CHECK(Rng(7).uniform_below(1) == 0);
    CHECK_THROWS_AS(Rng(7).uniform_below(0), std::invalid_argument);
    // mt19937(42) first word is 1608637542, below the limit 2^32 - 6.
    CHECK(Rng(42).uniform_below(10) == 2);

    for (std::uint32_t bound : {3u, 10u, 1000u, 0x80000001u, 0xFFFFFFFFu}) {
      Rng rng(99);
      std::mt19937 engine(99);
      for (int i = 0; i < 2000; ++i) REQUIRE(rng.uniform_below(bound) == reference_below(engine, bound));
    }
  }

  TEST_CASE("uniform_below stays below small bounds") {
    Rng rng(2024);
    for (std::uint32_t bound = 1; bound <= 64; ++bound)
      for (int i = 0; i < 100000; ++i) REQUIRE(rng.uniform_below(bound) < bound);
  }

  TEST_CASE("uniform_below frequencies are flat") {
    Rng rng(3);
    std::vector<int> counts(10, 0);
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) ++counts[rng.uniform_below(10)];
    const double expected = draws / 10.0;
    const double sigma = std::sqrt(draws * 0.1 * 0.9);
    double chi2 = 0.0;
    for (int c : counts) {
      CHECK(std::abs(c - expected) < 5 * sigma);
      chi2 += (c - expected) * (c - expected) / expected;
    }
    // 9 degrees of freedom; 5 sigma of the chi-square is about 21.
    CHECK(chi2 < 9 + 5 * std::sqrt(18.0));
  }

  TEST_CASE("unit and coin") {
    Rng rng(11);
    std::mt19937 engine(11);
    for (int i = 0; i < 100; ++i) {
      const double u = rng.unit();
      REQUIRE(u == engine() / 4294967296.0);
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
    }
    Rng zero(5), one(5);
    for (int i = 0; i < 100; ++i) {
      REQUIRE_FALSE(zero.coin(0.0));
      REQUIRE(one.coin(1.0));
    }
  }

  TEST_CASE("sample_distinct") {
    Rng rng(8);
    CHECK(rng.sample_distinct(0, 0, 10).empty());
    CHECK_THROWS_AS(rng.sample_distinct(11, 0, 10), std::invalid_argument);

    auto full = rng.sample_distinct(10, 50, 10);
    std::sort(full.begin(), full.end());
    for (std::uint32_t i = 0; i < 10; ++i) CHECK(full[i] == 50 + i);

    // Draw order with duplicates skipped, replayed on a raw engine.
    Rng a(123);
    std::mt19937 engine(123);
    const auto triple = a.sample_distinct(3, 200, 100);
    std::vector<std::uint32_t> expect;
    while (expect.size() < 3) {
      const std::uint32_t v = 200 + reference_below(engine, 100);
      if (std::find(expect.begin(), expect.end(), v) == expect.end()) expect.push_back(v);
    }
    CHECK(triple == expect);
    CHECK(Rng(123).sample_distinct(3, 200, 100) == triple);

    std::vector<std::uint32_t> into{9, 9};
    Rng b(123);
    b.sample_distinct_into(3, 200, 100, into);
    // Appends after existing entries, which do not count as duplicates.
    CHECK(into == std::vector<std::uint32_t>{9, 9, triple[0], triple[1], triple[2]});
  }

  TEST_CASE("trial seeds") {
    CHECK(trial_seed(1, 0) == 1);
    CHECK(trial_seed(1, 29) == 30);
  }
}
