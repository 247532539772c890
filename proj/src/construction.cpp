#include "lowmult/construction.hpp"

#include <cmath>
#include <stdexcept>

#include "lowmult/digits.hpp"
#include "lowmult/hp_log.hpp"
#include "lowmult/parallel.hpp"
#include "lowmult/valuation.hpp"

namespace lowmult {

FracContext FracContext::make(std::uint64_t p, unsigned H, unsigned bits) {
  require_odd_prime(p);
  if (H < 1) throw std::invalid_argument("FracContext: H must be >= 1");
  if (bits < 128) throw std::invalid_argument("FracContext: need at least 128 fractional bits");
  FracContext ctx;
  ctx.prime = p;
  ctx.H = H;
  ctx.ratio = log2_over_logp(p, bits);
  if (ctx.ratio.error_ulps() > (BigInt(1) << (bits - 120)))
    throw std::runtime_error("FracContext: ratio enclosure wider than 2^-120");
  return ctx;
}

AlphaExact alpha_exact(std::uint64_t n, std::uint64_t p) {
  require_odd_prime(p);
  AlphaExact a;
  a.num = BigInt(1) << n;
  a.m = digit_count(a.num, p);
  a.den = pow_u(BigInt(p), a.m);
  // 2^n / p^m in [1/p, 1)
  if (!(a.num * p >= a.den && a.num < a.den))
    throw std::logic_error("alpha_exact: normalization failed");
  return a;
}

FixedReal alpha(std::uint64_t n, const FracContext& ctx) {
  const AlphaExact a = alpha_exact(n, ctx.prime);
  return FixedReal::from_ratio(a.num, a.den, ctx.ratio.bits());
}

bool u_membership(const FixedReal& x, const FracContext& ctx) {
  const BigInt one = BigInt(1) << x.bits();
  const BigInt lo = x.mantissa() - x.error_ulps();
  const BigInt hi = x.mantissa() + x.error_ulps();
  if (hi < 0 || lo >= one) throw std::invalid_argument("u_membership: x outside [0,1)");
  if (lo < 0 || hi >= one)
    throw PrecisionExhausted("u_membership: x straddles the unit interval boundary");
  const BigInt pH = pow_u(BigInt(ctx.prime), ctx.H);
  const BigInt k = x.mul_int(pH).floor_certified("u_membership");
  const std::uint64_t cap = ctx.prime / 3;
  BigInt q = k;
  for (unsigned i = 0; i < ctx.H; ++i) {
    if (q % ctx.prime > cap) return false;
    q /= ctx.prime;
  }
  return true;
}

std::optional<BigInt> find_s(const std::vector<FixedReal>& alphas,
                             const std::vector<FixedReal>& betas,
                             const std::vector<FracContext>& ctxs, const BigInt& s_max) {
  if (alphas.size() != betas.size() || alphas.size() != ctxs.size())
    throw std::invalid_argument("find_s: mismatched lengths");
  if (s_max < 1) throw std::invalid_argument("find_s: s_max must be >= 1");
  for (BigInt s = 1; s <= s_max; ++s) {
    bool ok = true;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      const FixedReal v = alphas[j].mul_int(s) + betas[j];
      if (!u_membership(v.frac_certified("find_s"), ctxs[j])) {
        ok = false;
        break;
      }
    }
    if (ok) return s;
  }
  return std::nullopt;
}

namespace {

bool window_digits_ok(const BigInt& q, std::uint64_t p, std::uint64_t cap, unsigned h_digits) {
  BigInt v = q;
  for (unsigned i = 0; i < h_digits; ++i) {
    if (v % p > cap) return false;
    v /= p;
  }
  return true;
}

}  // namespace

std::optional<BigInt> find_s_exact(const std::vector<std::uint64_t>& primes,
                                   const std::vector<AlphaExact>& alphas,
                                   const std::vector<BigInt>& beta_numerators, unsigned H,
                                   const BigInt& s_max) {
  const std::size_t r = primes.size();
  if (alphas.size() != r || beta_numerators.size() != r)
    throw std::invalid_argument("find_s_exact: mismatched lengths");
  if (s_max < 1) throw std::invalid_argument("find_s_exact: s_max must be >= 1");
  std::vector<BigInt> X(r), pmH(r);
  std::vector<std::uint64_t> cap(r);
  std::vector<unsigned> hd(r);
  for (std::size_t j = 0; j < r; ++j) {
    X[j] = beta_numerators[j] % alphas[j].den;
    if (X[j] < 0) X[j] += alphas[j].den;
    pmH[j] = alphas[j].m > H ? pow_u(BigInt(primes[j]), alphas[j].m - H) : BigInt(1);
    cap[j] = primes[j] / 3;
    hd[j] = static_cast<unsigned>(std::min<std::uint64_t>(H, alphas[j].m));
  }
  for (BigInt s = 1; s <= s_max; ++s) {
    bool ok = true;
    for (std::size_t j = 0; j < r; ++j) {
      X[j] += alphas[j].num;  // num < den, one subtraction normalizes
      if (X[j] >= alphas[j].den) X[j] -= alphas[j].den;
    }
    for (std::size_t j = 0; j < r; ++j) {
      if (!window_digits_ok(X[j] / pmH[j], primes[j], cap[j], hd[j])) {
        ok = false;
        break;
      }
    }
    if (ok) return s;
  }
  return std::nullopt;
}

std::uint64_t choose_ell(std::uint64_t p_min, unsigned H) {
  require_odd_prime(p_min);
  if (H < 1) throw std::invalid_argument("choose_ell: H must be >= 1");
  const BigInt pH = pow_u(BigInt(p_min), H);
  std::uint64_t ell = (bit_length(pH) - 1) / 2;
  while ((BigInt(1) << (2 * (ell + 1))) < pH) ++ell;
  while (ell > 0 && (BigInt(1) << (2 * ell)) >= pH) --ell;
  if (!((BigInt(1) << (2 * ell)) < pH && pH < (BigInt(1) << (2 * ell + 2))))
    throw std::logic_error("choose_ell: no valid ell");
  return ell;
}

unsigned default_window(std::uint64_t N) {
  if (N < 8) return 2;
  const double ll = std::ceil(std::log(std::log(static_cast<double>(N))));
  return std::max(2u, static_cast<unsigned>(ll));
}

BuildReport build_n(const PrimeSet& primes, std::uint64_t N, unsigned H, std::uint64_t t,
                    const BigInt& s_budget, const BlockObserver* observer) {
  if (H == 0) H = default_window(N);
  const std::uint64_t p_min = primes.smallest();
  const std::uint64_t ell = choose_ell(p_min, H);
  if (ell == 0)
    throw std::invalid_argument("build_n: p_min^H < 4 leaves no block length; raise H");
  const std::uint64_t n_blocks = N / ell;
  if (n_blocks < 1) throw std::invalid_argument("build_n: N too small for one block");
  if (t >= ell) throw std::invalid_argument("build_n: t must lie in [0, ell)");
  if (s_budget < 1) throw std::invalid_argument("build_n: s budget must be >= 1");

  const std::size_t r = primes.r();
  BigInt paper_bound;
  {
    const std::uint64_t e = 10ull * r * r * H;
    // 10^(10 r^2 H) is astronomically loose; materialize it only when sane
    paper_bound = e <= 100000 ? pow_u(BigInt(10), e) : s_budget;
  }
  const bool paper_binding = paper_bound <= s_budget;
  const BigInt s_max = paper_binding ? paper_bound : s_budget;

  BuildReport rep;
  rep.N = N;
  rep.H = H;
  rep.ell = ell;
  rep.t = t;
  rep.n_blocks = n_blocks;
  rep.s_max_used = s_max;
  rep.paper_bound_binding = paper_binding;

  BigInt partial = BigInt(1) << (ell * n_blocks + t);  // n_0 = 1

  std::vector<std::uint64_t> prev_m(r, 0);
  std::vector<std::uint64_t> gaps_ge_H(r, 0), gaps_zero(r, 0);

  for (std::uint64_t d = 1; d <= n_blocks; ++d) {
    const std::uint64_t h = ell * (n_blocks - d) + t;
    const BigInt two_h = BigInt(1) << h;

    BlockRecord rec;
    rec.d = d;
    rec.h = h;
    // beta_j = frac(partial / p^m) by exact division; the U-membership scan
    // runs on the exact numerators (s*2^h + partial) mod p^m
    std::vector<AlphaExact> alphas;
    std::vector<BigInt> betas;
    for (std::size_t j = 0; j < r; ++j) {
      AlphaExact a;
      a.num = two_h;
      a.m = digit_count(two_h, primes.primes[j]);
      a.den = pow_u(BigInt(primes.primes[j]), a.m);
      rec.m.push_back(a.m);
      if (d > 1) {
        const std::uint64_t gap = prev_m[j] - a.m;
        if (gap >= H) ++gaps_ge_H[j];
        if (gap == 0) ++gaps_zero[j];
      }
      prev_m[j] = a.m;
      betas.push_back(partial % a.den);
      alphas.push_back(std::move(a));
    }
    const auto found = find_s_exact(primes.primes, alphas, betas, H, s_max);

    const BigInt before = partial;
    if (found) {
      partial += *found * two_h;
      rec.s = *found;
      rec.sharp = true;
      ++rep.sharp_blocks;
    } else {
      rec.s = 0;
      rec.sharp = false;
      ++rep.flat_blocks;
    }
    if (observer) (*observer)(rec, before, partial);
    rep.blocks.push_back(std::move(rec));
  }

  rep.n = partial;
  for (std::size_t j = 0; j < r; ++j) {
    PerPrimeBuild pp;
    pp.prime = primes.primes[j];
    const DigitVector dv = to_digits(partial, pp.prime);
    pp.digit_count = dv.digits.size();
    const std::uint64_t cap = pp.prime / 3;
    for (std::uint64_t dig : dv.digits)
      if (dig > cap) ++pp.bad_digits;
    const ValuationReport vr = kummer_valuation(partial, pp.prime);
    pp.valuation = vr.valuation;
    pp.trivial_bound = vr.trivial_bound;
    pp.gaps_at_least_H = gaps_ge_H[j];
    pp.gaps_zero = gaps_zero[j];
    rep.per_prime.push_back(std::move(pp));
  }
  return rep;
}

namespace {

// worst normalized bad-digit fraction, exact rational so the sweep has
// tie-free comparisons
std::pair<BigInt, BigInt> worst_fraction(const BuildReport& rep) {
  BigInt num = 0, den = 1;
  for (const auto& pp : rep.per_prime) {
    const BigInt n2 = pp.bad_digits, d2 = std::max<std::uint64_t>(pp.digit_count, 1);
    if (n2 * den > num * d2) {
      num = n2;
      den = d2;
    }
  }
  return {num, den};
}

}  // namespace

std::pair<std::uint64_t, BuildReport> best_t_sweep(const PrimeSet& primes, std::uint64_t N,
                                                   unsigned H, const BigInt& s_budget,
                                                   unsigned workers) {
  if (H == 0) H = default_window(N);
  const std::uint64_t ell = choose_ell(primes.smallest(), H);
  if (ell == 0) throw std::invalid_argument("best_t_sweep: p_min^H < 4; raise H");
  if (workers == 0) workers = hardware_workers();
  std::vector<std::optional<BuildReport>> reports(ell);
  parallel_for(ell, workers,
               [&](std::size_t t) { reports[t] = build_n(primes, N, H, t, s_budget); });
  std::size_t best = 0;
  auto best_frac = worst_fraction(*reports[0]);
  for (std::size_t t = 1; t < ell; ++t) {
    auto f = worst_fraction(*reports[t]);
    if (f.first * best_frac.second < best_frac.first * f.second) {
      best = t;
      best_frac = f;
    }
  }
  return {best, std::move(*reports[best])};
}

}  // namespace lowmult
