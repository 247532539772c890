#ifndef LOWMULT_VALUATION_HPP
#define LOWMULT_VALUATION_HPP

#include <cstdint>
#include <vector>

#include "lowmult/bigint.hpp"
#include "lowmult/primes.hpp"

namespace lowmult {

struct ValuationReport {
  BigInt n;
  std::uint64_t prime = 3;
  std::uint64_t valuation = 0;   // nu_p(binom(2n, n))
  std::size_t digit_count = 0;   // base-p digits of n
  std::size_t trivial_bound = 0; // = digit_count = 1 + floor(log_p n) for n >= 1
};

// Carry count of n + n in base p; equals nu_p(binom(2n,n)) by Kummer.
ValuationReport kummer_valuation(const BigInt& n, std::uint64_t p);

// 1 + floor(log n / log p), computed as the base-p digit count; n >= 1.
std::size_t trivial_bound(const BigInt& n, std::uint64_t p);

// Exact binom(2n, n); test oracle, capped at n <= 10^4.
BigInt central_binomial(std::uint32_t n);

// nu_p(binom(2n,n)) for each p, by exact computation and repeated division.
// Deliberately independent of the carry-counting path.
std::vector<std::uint64_t> central_binomial_factor_oracle(std::uint32_t n, const PrimeSet& primes);

}  // namespace lowmult

#endif
