#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ptl/error.hpp"
#include "ptl/patterns.hpp"

using namespace ptl;

namespace {

// Brute force: residues x mod p with prod (x + o) = 0 (mod p).
std::uint64_t omega_by_enumeration(const TuplePattern& pattern, std::uint64_t p) {
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    for (const std::uint64_t o : pattern.offsets()) {
      if ((x + o) % p == 0) {
        ++count;
        break;
      }
    }
  }
  return count;
}

}  // namespace

TEST_SUITE("patterns") {
  TEST_CASE("parsing") {
    CHECK(TuplePattern::parse("0,2,6").offsets().size() == 3);
    CHECK(TuplePattern::parse(" 0, 2 ").to_string() == "0,2");
    CHECK(TuplePattern::parse("0") == TuplePattern({0}));
    CHECK_THROWS_AS(TuplePattern::parse("0,6,2"), DomainError);
    CHECK_THROWS_AS(TuplePattern::parse("0,2,2"), DomainError);
    CHECK_THROWS_AS(TuplePattern::parse("0,-2"), DomainError);
    CHECK_THROWS_AS(TuplePattern::parse("2,4"), DomainError);
    CHECK_THROWS_AS(TuplePattern::parse(""), DomainError);
    CHECK_THROWS_AS(TuplePattern::parse("0,,2"), DomainError);
    CHECK_THROWS_AS(TuplePattern::parse("0,x"), DomainError);
  }

  TEST_CASE("omega examples") {
    CHECK(omega(TuplePattern({0, 2}), 2) == 1);
    CHECK(omega(TuplePattern({0, 2, 4}), 3) == 3);
    CHECK(omega(TuplePattern({0, 2, 6}), 5) == 3);
    CHECK(omega(TuplePattern({0, 2}), 3) == 2);
    CHECK_THROWS_AS(omega(TuplePattern({0, 2}), 4), DomainError);
    CHECK_THROWS_AS(omega(TuplePattern({0, 2}), 1), DomainError);
  }

  TEST_CASE("omega equals residue enumeration and ignores translation") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::uint64_t> offs{0};
      const int k = 1 + static_cast<int>(rng() % 6);
      for (int i = 1; i < k; ++i) offs.push_back(offs.back() + 1 + rng() % 12);
      const TuplePattern pattern(offs);
      for (const std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 101ULL}) {
        const std::uint64_t w = omega(pattern, p);
        CHECK(w == omega_by_enumeration(pattern, p));
        CHECK(w >= 1);
        CHECK(w <= std::min<std::uint64_t>(pattern.size(), p));
        // Shifting the counting variable: x -> x + s permutes the residues.
        const std::uint64_t s = rng() % 1000;
        std::uint64_t shifted = 0;
        for (std::uint64_t x = 0; x < p; ++x) {
          for (const std::uint64_t o : pattern.offsets()) {
            if ((x + s + o) % p == 0) {
              ++shifted;
              break;
            }
          }
        }
        CHECK(shifted == w);
      }
    }
  }

  TEST_CASE("admissibility") {
    CHECK(is_admissible(TuplePattern({0})));
    CHECK(is_admissible(TuplePattern({0, 2})));
    CHECK_FALSE(is_admissible(TuplePattern({0, 2, 4})));
    CHECK(is_admissible(TuplePattern({0, 2, 6})));
    CHECK(is_admissible(TuplePattern({0, 4, 6})));
    CHECK_FALSE(is_admissible(TuplePattern({0, 1})));  // odd offset fails at p = 2
    CHECK(is_admissible(TuplePattern({0, 2, 6, 8})));
    CHECK_FALSE(is_admissible(TuplePattern({0, 2, 6, 8, 10})));  // covers 0..4 mod 5
  }

  TEST_CASE("singular series examples") {
    const SingularSeriesValue twin = singular_series(TuplePattern({0, 2}), 1'000'000);
    CHECK(twin.admissible);
    // Truncated product from an independent double-precision evaluation.
    CHECK(twin.constant == doctest::Approx(1.3203237211796763).epsilon(1e-12));
    // The full constant 1.3203236316... lies within the advertised tail bound.
    CHECK(std::abs(twin.constant - 1.3203236316) <= twin.tail_bound * twin.constant);
    CHECK(twin.tail_bound > 0.0);
    CHECK(twin.tail_bound < 4e-6 * 1.001);

    for (const std::uint64_t p : {2ULL, 10ULL, 1000ULL}) {
      const SingularSeriesValue c3 = singular_series(TuplePattern({0, 2, 4}), p);
      CHECK_FALSE(c3.admissible);
      CHECK(c3.constant == 0.0);
      CHECK(c3.tail_bound == 0.0);
      CHECK(singular_series(TuplePattern({0}), p).constant == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(singular_series(TuplePattern({0, 2}), 1), DomainError);
  }

  TEST_CASE("twin factors match the closed form p(p-2)/(p-1)^2") {
    const TuplePattern twin({0, 2});
    double previous = singular_series(twin, 2).constant;
    CHECK(previous == doctest::Approx(2.0));
    for (std::uint64_t p = 3; p <= 100; ++p) {
      if (!test::trial_division_is_prime(p)) continue;
      const double current = singular_series(twin, p).constant;
      const double pd = static_cast<double>(p);
      CHECK(current / previous == doctest::Approx(pd * (pd - 2) / ((pd - 1) * (pd - 1))).epsilon(1e-13));
      previous = current;
    }
  }

  TEST_CASE("truncation error is covered by the tail bound") {
    for (const auto& offs : std::vector<std::vector<std::uint64_t>>{
             {0, 2}, {0, 2, 6}, {0, 4, 6, 10}, {0, 2, 6, 8, 12}, {0, 6}}) {
      const TuplePattern pattern(offs);
      const std::uint64_t start = std::max<std::uint64_t>(pattern.max_offset(), 2 * pattern.size());
      for (const std::uint64_t p1 : std::vector<std::uint64_t>{start, start * 10, 10'000}) {
        const SingularSeriesValue c1 = singular_series(pattern, p1);
        for (const std::uint64_t p2 : {p1 * 3, p1 * 100}) {
          const SingularSeriesValue c2 = singular_series(pattern, p2);
          CAPTURE(pattern.to_string());
          CHECK(std::abs(c2.constant - c1.constant) <= c1.tail_bound * c1.constant);
        }
      }
    }
  }

  TEST_CASE("log-space accumulation agrees with the direct product") {
    // k = 8 switches to log space; compare with a long-double direct product.
    const TuplePattern pattern({0, 2, 6, 8, 12, 18, 20, 26});
    REQUIRE(is_admissible(pattern));
    long double direct = 1.0L;
    for (std::uint64_t p = 2; p <= 5000; ++p) {
      if (!test::trial_division_is_prime(p)) continue;
      const long double pd = static_cast<long double>(p);
      direct *= (1.0L - static_cast<long double>(omega(pattern, p)) / pd) / std::pow(1.0L - 1.0L / pd, 8.0L);
    }
    CHECK(singular_series(pattern, 5000).constant == doctest::Approx(static_cast<double>(direct)).epsilon(1e-11));
  }

  TEST_CASE("primorial ratio") {
    CHECK(primorial_ratio(2) == doctest::Approx(2.0));
    CHECK(primorial_ratio(3) == doctest::Approx(3.0));
    CHECK(primorial_ratio(10) == doctest::Approx(35.0 / 8.0));
    CHECK(primorial_ratio(12) == doctest::Approx(35.0 / 8.0 * 11.0 / 10.0));
    CHECK_THROWS_AS(primorial_ratio(1), DomainError);
  }
}
