#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lowmult/digits.hpp"
#include "lowmult/primes.hpp"
#include "lowmult/rng.hpp"
#include "lowmult/valuation.hpp"

using namespace lowmult;

namespace {

// independent digit oracle: repeated division written from scratch
std::vector<std::uint64_t> digits_by_division(BigInt n, std::uint64_t base) {
  std::vector<std::uint64_t> d;
  while (n != 0) {
    d.push_back((n % base).convert_to<std::uint64_t>());
    n /= base;
  }
  return d;
}

// carry count by longhand digit-vector addition, the second route
std::uint64_t carries_longhand(const BigInt& n, std::uint64_t p) {
  const DigitVector a = to_digits(n, p);
  const DigitVector s = add_longhand(a, a);
  // recover carry count from the identity: digit_sum(n) * 2 - digit_sum(2n) = (p-1) * carries
  std::uint64_t sa = 0, ss = 0;
  for (auto d : a.digits) sa += d;
  for (auto d : s.digits) ss += d;
  return (2 * sa - ss) / (p - 1);
}

}  // namespace

TEST_CASE("to_digits examples") {
  CHECK(to_digits(10, 3).digits == std::vector<std::uint64_t>{1, 0, 1});
  CHECK(to_digits(0, 7).digits.empty());
  CHECK(to_digits(756, 7).digits == std::vector<std::uint64_t>{0, 3, 1, 2});
  CHECK_THROWS_AS(to_digits(5, 1), std::invalid_argument);
}

TEST_CASE("digit round-trip, random values up to 2^256") {
  Rng rng(12345);
  for (int iter = 0; iter < 2000; ++iter) {
    BigInt n = 0;
    const int words = 1 + static_cast<int>(rng.below(4));
    for (int w = 0; w < words; ++w) n = (n << 64) | rng.next_u64();
    for (std::uint64_t base : {2ull, 3ull, 5ull, 7ull, 11ull}) {
      const DigitVector dv = to_digits(n, base);
      CHECK(from_digits(dv) == n);
      if (!dv.digits.empty()) CHECK(dv.digits.back() != 0);
      const auto oracle = digits_by_division(n, base);
      CHECK(dv.digits == oracle);
    }
  }
}

TEST_CASE("kummer examples") {
  CHECK(kummer_valuation(5, 3).valuation == 2);  // binom(10,5) = 252 = 2^2 * 3^2 * 7
  CHECK(kummer_valuation(1, 3).valuation == 0);
  CHECK(kummer_valuation(10, 7).valuation == 0);  // binom(20,10) = 184756
  CHECK_THROWS_AS(kummer_valuation(5, 9), std::invalid_argument);
  CHECK_THROWS_AS(kummer_valuation(5, 2), std::invalid_argument);
}

TEST_CASE("factor oracle examples") {
  CHECK(central_binomial(5) == 252);
  CHECK(central_binomial_factor_oracle(5, PrimeSet({3, 5, 7})) ==
        std::vector<std::uint64_t>{2, 0, 1});
  CHECK(central_binomial_factor_oracle(0, PrimeSet({3})) == std::vector<std::uint64_t>{0});
  CHECK(central_binomial_factor_oracle(10, PrimeSet({3, 5, 7})) ==
        std::vector<std::uint64_t>{0, 0, 0});
  CHECK_THROWS_AS(central_binomial(10001), std::invalid_argument);
}

TEST_CASE("trivial bound examples") {
  CHECK(trivial_bound(756, 7) == 4);
  CHECK(trivial_bound(1, 3) == 1);
  CHECK(trivial_bound(pow_u(3, 10), 3) == 11);
  CHECK_THROWS_AS(trivial_bound(0, 3), std::invalid_argument);
}

TEST_CASE("oracle equivalence, exhaustive n <= 400 here (acceptance runs 2000)") {
  for (std::uint32_t n = 0; n <= 400; ++n) {
    const PrimeSet ps({3, 5, 7, 11, 13});
    const auto oracle = central_binomial_factor_oracle(n, ps);
    for (std::size_t j = 0; j < ps.r(); ++j) {
      const auto rep = kummer_valuation(n, ps.primes[j]);
      CHECK(rep.valuation == oracle[j]);
      if (n >= 1) CHECK(rep.valuation <= rep.trivial_bound);
    }
  }
}

TEST_CASE("carry-count symmetry against longhand adder") {
  Rng rng(777);
  for (int iter = 0; iter < 500; ++iter) {
    BigInt n = rng.next_u64();
    n = (n << 32) | rng.next_u64();
    for (std::uint64_t p : {3ull, 7ull, 13ull}) {
      CHECK(kummer_valuation(n, p).valuation == carries_longhand(n, p));
    }
  }
}

TEST_CASE("longhand adder matches bigint addition") {
  Rng rng(31);
  for (int iter = 0; iter < 200; ++iter) {
    const BigInt a = rng.next_u64(), b = rng.next_u64();
    for (std::uint64_t base : {3ull, 10ull}) {
      CHECK(from_digits(add_longhand(to_digits(a, base), to_digits(b, base))) == a + b);
    }
  }
}

TEST_CASE("primality helper") {
  CHECK(is_prime(BigInt(2)));
  CHECK(is_prime(BigInt(1009)));
  CHECK_FALSE(is_prime(BigInt(1)));
  CHECK_FALSE(is_prime(BigInt(1007)));  // 19 * 53
  CHECK(is_prime(BigInt("2305843009213693951")));  // 2^61 - 1
  CHECK_FALSE(is_prime(BigInt("2305843009213693953")));
  CHECK_THROWS_AS(PrimeSet({3, 5, 3}), std::invalid_argument);
  CHECK_THROWS_AS(PrimeSet({2, 5}), std::invalid_argument);
}
