#include "lowmult/valuation.hpp"

#include <stdexcept>

#include "lowmult/digits.hpp"

namespace lowmult {

ValuationReport kummer_valuation(const BigInt& n, std::uint64_t p) {
  require_odd_prime(p);
  if (n < 0) throw std::invalid_argument("kummer_valuation: n must be >= 0");
  ValuationReport rep;
  rep.n = n;
  rep.prime = p;
  const DigitVector dv = to_digits(n, p);
  rep.digit_count = dv.digits.size();
  rep.trivial_bound = dv.digits.size();
  std::uint64_t carry = 0, count = 0;
  for (std::uint64_t d : dv.digits) {
    const std::uint64_t s = 2 * d + carry;
    if (s >= p) {
      carry = 1;
      ++count;
    } else {
      carry = 0;
    }
  }
  rep.valuation = count;
  return rep;
}

std::size_t trivial_bound(const BigInt& n, std::uint64_t p) {
  require_odd_prime(p);
  if (n < 1) throw std::invalid_argument("trivial_bound: n must be >= 1");
  return digit_count(n, p);
}

BigInt central_binomial(std::uint32_t n) {
  if (n > 10000) throw std::invalid_argument("central_binomial: oracle capped at n <= 10^4");
  BigInt r = 1;
  for (std::uint32_t i = 1; i <= n; ++i) {
    r *= (BigInt(n) + i);
    r /= i;  // exact: r is binom(n+i, i) after this step
  }
  return r;
}

std::vector<std::uint64_t> central_binomial_factor_oracle(std::uint32_t n, const PrimeSet& primes) {
  const BigInt c = central_binomial(n);
  std::vector<std::uint64_t> out;
  out.reserve(primes.r());
  for (std::uint64_t p : primes.primes) {
    BigInt v = c;
    std::uint64_t e = 0;
    while (v % p == 0) {
      v /= p;
      ++e;
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace lowmult
