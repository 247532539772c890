#include "lowmult/hp_log.hpp"

#include <map>
#include <mutex>

#include <mpfr.h>

#include "lowmult/primes.hpp"

namespace lowmult {

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_t v;
};

BigInt mpz_to_big(const mpz_t z) {
  char* s = mpz_get_str(nullptr, 16, z);
  std::string hex(s);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(s, hex.size() + 1);
  bool neg = false;
  if (!hex.empty() && hex[0] == '-') {
    neg = true;
    hex = hex.substr(1);
  }
  BigInt out("0x" + hex);
  return neg ? -out : out;
}

// enclosure [lo, hi] -> FixedReal at `bits`
FixedReal enclosure_to_fixed(const mpfr_t lo, const mpfr_t hi, unsigned bits) {
  Mpfr a(mpfr_get_prec(lo) + bits + 8), b(mpfr_get_prec(hi) + bits + 8);
  mpfr_mul_2ui(a.v, lo, bits, MPFR_RNDD);
  mpfr_mul_2ui(b.v, hi, bits, MPFR_RNDU);
  mpz_t zlo, zhi;
  mpz_init(zlo);
  mpz_init(zhi);
  mpfr_get_z(zlo, a.v, MPFR_RNDD);
  mpfr_get_z(zhi, b.v, MPFR_RNDU);
  BigInt l = mpz_to_big(zlo), h = mpz_to_big(zhi);
  mpz_clear(zlo);
  mpz_clear(zhi);
  BigInt mid = (l + h) / 2;
  BigInt err = h - mid;
  if (mid - l > err) err = mid - l;
  return FixedReal(std::move(mid), std::move(err), bits);
}

struct Key {
  int kind;
  std::uint64_t p;
  unsigned bits;
  bool operator<(const Key& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (p != o.p) return p < o.p;
    return bits < o.bits;
  }
};

std::mutex g_cache_mu;
std::map<Key, FixedReal> g_cache;

FixedReal cached(int kind, std::uint64_t p, unsigned bits, FixedReal (*compute)(std::uint64_t, unsigned)) {
  const Key key{kind, p, bits};
  {
    std::lock_guard<std::mutex> lk(g_cache_mu);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  FixedReal v = compute(p, bits);
  std::lock_guard<std::mutex> lk(g_cache_mu);
  g_cache.emplace(key, v);
  return v;
}

FixedReal compute_log_nat(std::uint64_t k, unsigned bits) {
  const mpfr_prec_t prec = bits + 64;
  Mpfr lo(prec), hi(prec);
  mpfr_set_ui(lo.v, k, MPFR_RNDD);
  mpfr_log(lo.v, lo.v, MPFR_RNDD);
  mpfr_set_ui(hi.v, k, MPFR_RNDU);
  mpfr_log(hi.v, hi.v, MPFR_RNDU);
  return enclosure_to_fixed(lo.v, hi.v, bits);
}

FixedReal compute_ratio(std::uint64_t p, unsigned bits) {
  const mpfr_prec_t prec = bits + 64;
  Mpfr l2d(prec), l2u(prec), lpd(prec), lpu(prec), lo(prec), hi(prec);
  mpfr_const_log2(l2d.v, MPFR_RNDD);
  mpfr_const_log2(l2u.v, MPFR_RNDU);
  mpfr_set_ui(lpd.v, p, MPFR_RNDD);
  mpfr_log(lpd.v, lpd.v, MPFR_RNDD);
  mpfr_set_ui(lpu.v, p, MPFR_RNDU);
  mpfr_log(lpu.v, lpu.v, MPFR_RNDU);
  mpfr_div(lo.v, l2d.v, lpu.v, MPFR_RNDD);
  mpfr_div(hi.v, l2u.v, lpd.v, MPFR_RNDU);
  return enclosure_to_fixed(lo.v, hi.v, bits);
}

FixedReal compute_condition(std::uint64_t p, unsigned bits) {
  const mpfr_prec_t prec = bits + 64;
  // log(2p/(p+1)), both directions
  Mpfr qd(prec), qu(prec), nd(prec), nu(prec), lpd(prec), lpu(prec), lo(prec), hi(prec);
  mpfr_set_ui(qd.v, 2 * p, MPFR_RNDD);
  mpfr_div_ui(qd.v, qd.v, p + 1, MPFR_RNDD);
  mpfr_set_ui(qu.v, 2 * p, MPFR_RNDU);
  mpfr_div_ui(qu.v, qu.v, p + 1, MPFR_RNDU);
  mpfr_log(nd.v, qd.v, MPFR_RNDD);
  mpfr_log(nu.v, qu.v, MPFR_RNDU);
  mpfr_set_ui(lpd.v, p, MPFR_RNDD);
  mpfr_log(lpd.v, lpd.v, MPFR_RNDD);
  mpfr_set_ui(lpu.v, p, MPFR_RNDU);
  mpfr_log(lpu.v, lpu.v, MPFR_RNDU);
  mpfr_div(lo.v, nd.v, lpu.v, MPFR_RNDD);
  mpfr_div(hi.v, nu.v, lpd.v, MPFR_RNDU);
  return enclosure_to_fixed(lo.v, hi.v, bits);
}

}  // namespace

FixedReal log_nat(std::uint64_t k, unsigned bits) {
  if (k < 2) throw std::invalid_argument("log_nat: k must be >= 2");
  return cached(0, k, bits, compute_log_nat);
}

FixedReal log2_over_logp(std::uint64_t p, unsigned bits) {
  require_odd_prime(p);
  return cached(1, p, bits, compute_ratio);
}

FixedReal condition_exponent(std::uint64_t p, unsigned bits) {
  require_odd_prime(p);
  return cached(2, p, bits, compute_condition);
}

}  // namespace lowmult
