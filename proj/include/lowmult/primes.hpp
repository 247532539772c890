#ifndef LOWMULT_PRIMES_HPP
#define LOWMULT_PRIMES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowmult/bigint.hpp"

namespace lowmult {

// Deterministic primality: trial division below 2^20, then Miller-Rabin with
// the witness set {2,...,37}, which is exact for n < 3.317e24.  All primes in
// this project are far below that.
bool is_prime(const BigInt& n);

void require_odd_prime(std::uint64_t p, const char* what = "prime");

// Ordered list of distinct odd primes defining a problem instance.
struct PrimeSet {
  std::vector<std::uint64_t> primes;

  PrimeSet() = default;
  explicit PrimeSet(std::vector<std::uint64_t> ps);
  static PrimeSet parse(const std::string& comma_list);

  std::size_t r() const { return primes.size(); }
  std::uint64_t smallest() const;
  std::uint64_t largest() const;
  std::string to_string() const;
};

}  // namespace lowmult

#endif
