#ifndef LOWMULT_HP_LOG_HPP
#define LOWMULT_HP_LOG_HPP

#include <cstdint>

#include "lowmult/fixed_point.hpp"

namespace lowmult {

// Certified logarithm enclosures, computed with MPFR directed rounding and
// returned as FixedReal intervals.

FixedReal log_nat(std::uint64_t k, unsigned bits);           // ln k, k >= 2
FixedReal log2_over_logp(std::uint64_t p, unsigned bits);    // ln 2 / ln p
// -log(1/2 + 1/(2p)) / log p = log(2p/(p+1)) / log p, the per-prime exponent
// of the density condition
FixedReal condition_exponent(std::uint64_t p, unsigned bits);

}  // namespace lowmult

#endif
