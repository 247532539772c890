#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lowmult/heuristics.hpp"
#include "lowmult/hp_log.hpp"

using namespace lowmult;

TEST_CASE("sigma {3,5,7} near 0.974, verdict ExpectInfinite") {
  const auto rep = condition_sum(PrimeSet({3, 5, 7}));
  CHECK(rep.sigma.to_double() == doctest::Approx(0.97405).epsilon(1e-3));
  CHECK(rep.verdict == Verdict::ExpectInfinite);
  CHECK(rep.per_prime_exponent.size() == 3);
  // paper's rounded per-prime exponents 0.37, 0.32, 0.29
  CHECK(rep.per_prime_exponent[0].to_double() == doctest::Approx(0.37).epsilon(0.01));
  CHECK(rep.per_prime_exponent[1].to_double() == doctest::Approx(0.32).epsilon(0.02));
  CHECK(rep.per_prime_exponent[2].to_double() == doctest::Approx(0.29).epsilon(0.02));
}

TEST_CASE("sigma {3} = -log(2/3)/log 3") {
  const auto rep = condition_sum(PrimeSet({3}));
  const double expect = -std::log(2.0 / 3.0) / std::log(3.0);
  CHECK(rep.sigma.to_double() == doctest::Approx(expect).epsilon(1e-12));
  CHECK(rep.verdict == Verdict::ExpectInfinite);
}

TEST_CASE("sigma {3,5,7,11,13} exceeds 1, verdict ExpectFinite") {
  const auto rep = condition_sum(PrimeSet({3, 5, 7, 11, 13}));
  CHECK(rep.sigma.to_double() > 1.0);
  CHECK(rep.verdict == Verdict::ExpectFinite);
}

TEST_CASE("12-digit postcondition: 128-bit and 320-bit sigma agree") {
  for (auto primes : {PrimeSet({3, 5, 7}), PrimeSet({3, 5, 7, 11, 13}), PrimeSet({101, 103})}) {
    const auto a = condition_sum(primes, 128);
    const auto b = condition_sum(primes, 320);
    CHECK(std::abs(a.sigma.to_double() - b.sigma.to_double()) < 1e-13);
    // certified radius is far below the 12-digit requirement
    CHECK(a.sigma.error_ulps() < (BigInt(1) << (128 - 100)));
  }
}

TEST_CASE("predicted_count examples") {
  CHECK(predicted_count(PrimeSet({3, 5, 7}), BigInt(1)) == doctest::Approx(1.0));
  const double c357 = predicted_count(PrimeSet({3, 5, 7}), BigInt(1000000));
  CHECK(c357 == doctest::Approx(std::pow(10.0, 6 * (1 - 0.974050))).epsilon(0.01));
  const double c3 = predicted_count(PrimeSet({3}), BigInt(1000000));
  CHECK(c3 == doctest::Approx(std::pow(10.0, 6 * (1 - 0.3690702464))).epsilon(0.01));
}

TEST_CASE("monotonicity: adding a prime strictly increases sigma") {
  const std::vector<std::uint64_t> pool{3, 5, 7, 11, 13, 17, 101};
  for (std::size_t k = 1; k < pool.size(); ++k) {
    const auto base = condition_sum(PrimeSet(std::vector<std::uint64_t>(pool.begin(), pool.begin() + k)));
    const auto more = condition_sum(PrimeSet(std::vector<std::uint64_t>(pool.begin(), pool.begin() + k + 1)));
    CHECK(base.sigma.definitely_less(more.sigma));
  }
}

TEST_CASE("per-prime exponent lies in (0, log2/logp), approaching the cap") {
  double prev_ratio = 0.0;
  for (std::uint64_t p : {3ull, 5ull, 97ull, 1009ull, 104729ull, 999983ull}) {
    const FixedReal e = condition_exponent(p, 128);
    const FixedReal cap = log2_over_logp(p, 128);
    CHECK(e.to_double() > 0.0);
    CHECK(e.definitely_less(cap));
    const double ratio = e.to_double() / cap.to_double();
    CHECK(ratio > prev_ratio);  // tends to the cap from below as p grows
    prev_ratio = ratio;
  }
  CHECK(prev_ratio > 0.99);
}

TEST_CASE("permutation invariance") {
  const auto a = condition_sum(PrimeSet({3, 5, 7}));
  const auto b = condition_sum(PrimeSet({7, 3, 5}));
  CHECK(a.sigma.mantissa() == b.sigma.mantissa());
  CHECK(a.sigma.error_ulps() == b.sigma.error_ulps());
}

TEST_CASE("rejects p = 2 and repeats") {
  CHECK_THROWS_AS(condition_sum(PrimeSet({2, 3})), std::invalid_argument);
  CHECK_THROWS_AS(condition_sum(PrimeSet({5, 5})), std::invalid_argument);
}
