#include "lowmult/heuristics.hpp"

#include <cmath>
#include <stdexcept>

#include "lowmult/hp_log.hpp"

namespace lowmult {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ExpectInfinite: return "ExpectInfinite";
    case Verdict::ExpectFinite: return "ExpectFinite";
    case Verdict::Borderline: return "Borderline";
  }
  return "?";
}

HeuristicReport condition_sum(const PrimeSet& primes, unsigned bits) {
  HeuristicReport rep;
  rep.primes = primes;
  FixedReal sum = FixedReal::exact_int(0, bits);
  for (std::uint64_t p : primes.primes) {
    FixedReal term = condition_exponent(p, bits);
    rep.per_prime_exponent.push_back(term);
    sum = sum + term;
  }
  rep.sigma = sum;
  const FixedReal lo_gate = FixedReal::from_double(1.0 - kBorderlineTol, bits);
  const FixedReal hi_gate = FixedReal::from_double(1.0 + kBorderlineTol, bits);
  if (sum.definitely_less(lo_gate))
    rep.verdict = Verdict::ExpectInfinite;
  else if (sum.definitely_greater(hi_gate))
    rep.verdict = Verdict::ExpectFinite;
  else
    rep.verdict = Verdict::Borderline;
  rep.predicted_count_exponent = 1.0 - sum.to_double();
  return rep;
}

double predicted_count(const PrimeSet& primes, const BigInt& limit) {
  if (limit < 1) throw std::invalid_argument("predicted_count: limit must be >= 1");
  if (limit == 1) return 1.0;
  const HeuristicReport rep = condition_sum(primes);
  // log(limit) from the bit length plus a mantissa correction
  const std::size_t nb = bit_length(limit);
  double mant;
  if (nb <= 62) {
    mant = static_cast<double>(limit.convert_to<std::uint64_t>());
    return std::exp(rep.predicted_count_exponent * std::log(mant));
  }
  const BigInt top = limit >> (nb - 62);
  mant = static_cast<double>(top.convert_to<std::uint64_t>());
  const double loglimit = std::log(mant) + static_cast<double>(nb - 62) * std::log(2.0);
  return std::exp(rep.predicted_count_exponent * loglimit);
}

}  // namespace lowmult
