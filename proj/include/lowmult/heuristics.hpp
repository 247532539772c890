#ifndef LOWMULT_HEURISTICS_HPP
#define LOWMULT_HEURISTICS_HPP

#include <vector>

#include "lowmult/fixed_point.hpp"
#include "lowmult/primes.hpp"

namespace lowmult {

enum class Verdict { ExpectInfinite, ExpectFinite, Borderline };

const char* verdict_name(Verdict v);

struct HeuristicReport {
  PrimeSet primes;
  std::vector<FixedReal> per_prime_exponent;  // -log(1/2 + 1/(2p_j)) / log p_j
  FixedReal sigma;                            // sum of the above
  Verdict verdict = Verdict::Borderline;
  double predicted_count_exponent = 0.0;      // 1 - sigma
};

// tolerance around sigma = 1 for the Borderline verdict
inline constexpr double kBorderlineTol = 1e-9;

HeuristicReport condition_sum(const PrimeSet& primes, unsigned bits = 128);

// limit^(1 - sigma), as a plain real estimate
double predicted_count(const PrimeSet& primes, const BigInt& limit);

}  // namespace lowmult

#endif
