#ifndef LOWMULT_CONSTRUCTION_HPP
#define LOWMULT_CONSTRUCTION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lowmult/bigint.hpp"
#include "lowmult/fixed_point.hpp"
#include "lowmult/primes.hpp"

namespace lowmult {

struct FracContext {
  std::uint64_t prime = 3;
  unsigned H = 2;
  FixedReal ratio;  // log2 / log p, certified

  static FracContext make(std::uint64_t p, unsigned H, unsigned bits = 128);
};

// 2^n / p^m as an exact rational, m the unique exponent placing it in [1/p, 1)
struct AlphaExact {
  BigInt num;  // 2^n
  BigInt den;  // p^m
  std::uint64_t m = 0;
};

AlphaExact alpha_exact(std::uint64_t n, std::uint64_t p);
FixedReal alpha(std::uint64_t n, const FracContext& ctx);

// x in [0,1) has its first H base-p digits all <= floor(p/3)
bool u_membership(const FixedReal& x, const FracContext& ctx);

// least s in [1, s_max] with frac(s*alpha_j + beta_j) in U_j(H) for all j;
// raises PrecisionExhausted when a certified decision is impossible
std::optional<BigInt> find_s(const std::vector<FixedReal>& alphas,
                             const std::vector<FixedReal>& betas,
                             const std::vector<FracContext>& ctxs, const BigInt& s_max);

// same scan over exact rationals: alpha_j = num/den = 2^h / p^m and
// beta_j = beta_numerators[j] / den; boundary cases are decided exactly
std::optional<BigInt> find_s_exact(const std::vector<std::uint64_t>& primes,
                                   const std::vector<AlphaExact>& alphas,
                                   const std::vector<BigInt>& beta_numerators, unsigned H,
                                   const BigInt& s_max);

// unique ell with 4^ell < p_min^H < 4^(ell+1)
std::uint64_t choose_ell(std::uint64_t p_min, unsigned H);

unsigned default_window(std::uint64_t N);  // max(2, ceil(log log N))

struct BlockRecord {
  std::uint64_t d = 0;  // block index, 1..N'
  std::uint64_t h = 0;  // exponent ell*(N'-d) + t
  BigInt s;             // chosen multiplier; 0 for a flat block
  bool sharp = false;
  std::vector<std::uint64_t> m;  // m_{j,d} per prime
};

struct PerPrimeBuild {
  std::uint64_t prime = 0;
  std::uint64_t bad_digits = 0;  // base-p digits of n exceeding floor(p/3)
  std::uint64_t digit_count = 0;
  std::uint64_t valuation = 0;  // nu_p(binom(2n,n)), recomputed independently
  std::uint64_t trivial_bound = 0;
  std::uint64_t gaps_at_least_H = 0;  // blocks with m_{j,d} - m_{j,d+1} >= H
  std::uint64_t gaps_zero = 0;        // blocks where the window did not advance
};

struct BuildReport {
  BigInt n;
  std::vector<PerPrimeBuild> per_prime;
  std::uint64_t sharp_blocks = 0;
  std::uint64_t flat_blocks = 0;
  std::uint64_t N = 0;
  unsigned H = 0;
  std::uint64_t ell = 0;
  std::uint64_t t = 0;
  std::uint64_t n_blocks = 0;  // N'
  BigInt s_max_used;
  bool paper_bound_binding = false;  // the 10^(10 r^2 H) cap was the binding one
  std::vector<BlockRecord> blocks;
};

// called after every block with the state before and after the block's term
using BlockObserver =
    std::function<void(const BlockRecord&, const BigInt& before, const BigInt& after)>;

BuildReport build_n(const PrimeSet& primes, std::uint64_t N, unsigned H, std::uint64_t t,
                    const BigInt& s_budget, const BlockObserver* observer = nullptr);

// run every t in [0, ell) and keep the one minimizing the worst normalized
// bad-digit fraction; ties go to the smaller t
std::pair<std::uint64_t, BuildReport> best_t_sweep(const PrimeSet& primes, std::uint64_t N,
                                                   unsigned H, const BigInt& s_budget,
                                                   unsigned workers = 0);

}  // namespace lowmult

#endif
