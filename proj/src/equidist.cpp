#include "lowmult/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "lowmult/hp_log.hpp"
#include "lowmult/rng.hpp"

namespace lowmult {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

std::array<std::uint64_t, 4> pack_mant(const BigInt& m) {
  std::array<std::uint64_t, 4> out{};
  BigInt v = m;
  for (int i = 0; i < 4; ++i) {
    out[i] = (v & 0xffffffffffffffffull).convert_to<std::uint64_t>();
    v >>= 64;
  }
  return out;
}

BigRat frac_rat(const BigRat& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;  // floor
  return x - BigRat(q);
}

// distance from x to the nearest integer, exact
BigRat dist_to_int(const BigRat& x) {
  const BigRat f = frac_rat(x);
  const BigRat other = BigRat(1) - f;
  return f < other ? f : other;
}

}  // namespace

double OrbitSample::value(std::size_t n, std::size_t j) const {
  const auto& m = mants[(n - 1) * primes.r() + j];
  // top 64 bits of the 256-bit mantissa
  return static_cast<double>(m[3]) * 0x1.0p-64 + static_cast<double>(m[2]) * 0x1.0p-128;
}

BigInt OrbitSample::mantissa(std::size_t n, std::size_t j) const {
  const auto& m = mants[(n - 1) * primes.r() + j];
  BigInt v = 0;
  for (int i = 3; i >= 0; --i) {
    v <<= 64;
    v |= m[i];
  }
  return v;
}

OrbitSample orbit(const PrimeSet& primes, std::size_t N) {
  if (N < 1) throw std::invalid_argument("orbit: N must be >= 1");
  OrbitSample s;
  s.primes = primes;
  s.N = N;
  s.mants.resize(N * primes.r());
  const BigInt mask = (BigInt(1) << kOrbitBits) - 1;
  std::uint64_t worst_err = 0;
  for (std::size_t j = 0; j < primes.r(); ++j) {
    const FixedReal ratio = log2_over_logp(primes.primes[j], kOrbitBits);
    const std::uint64_t step_err = ratio.error_ulps().convert_to<std::uint64_t>() + 1;
    BigInt acc = 0;
    for (std::size_t n = 1; n <= N; ++n) {
      acc += ratio.mantissa();
      acc &= mask;  // fractional part: the ratio is positive and < 1
      s.mants[(n - 1) * primes.r() + j] = pack_mant(acc);
    }
    worst_err = std::max(worst_err, step_err * static_cast<std::uint64_t>(N));
  }
  s.err_ulps = worst_err;
  return s;
}

double weyl_sum(const OrbitSample& sample, const std::vector<std::int64_t>& k) {
  if (k.size() != sample.primes.r()) throw std::invalid_argument("weyl_sum: k length mismatch");
  if (std::all_of(k.begin(), k.end(), [](std::int64_t v) { return v == 0; }))
    throw std::invalid_argument("weyl_sum: k must be nonzero");
  double re = 0, im = 0, re_c = 0, im_c = 0;  // Kahan-compensated
  for (std::size_t n = 1; n <= sample.N; ++n) {
    double phase = 0;
    for (std::size_t j = 0; j < k.size(); ++j)
      if (k[j] != 0) phase += static_cast<double>(k[j]) * sample.value(n, j);
    phase -= std::floor(phase);
    const double a = std::cos(kTau * phase), b = std::sin(kTau * phase);
    double y = a - re_c, t = re + y;
    re_c = (t - re) - y;
    re = t;
    y = b - im_c;
    t = im + y;
    im_c = (t - im) - y;
    im = t;
  }
  return std::sqrt(re * re + im * im) / static_cast<double>(sample.N);
}

BoxReport box_occupancy(const OrbitSample& sample, std::uint64_t P, std::size_t k_rel) {
  if (P < 2) throw std::invalid_argument("box_occupancy: P must be >= 2");
  const std::size_t r = sample.primes.r();
  // sparse cell map; the key must fit 64 bits
  double cells = 1;
  for (std::size_t j = 0; j < r; ++j) cells *= static_cast<double>(P);
  if (cells > 9e18) throw std::invalid_argument("box_occupancy: P^r exceeds the key space");
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  counts.reserve(sample.N * 2);
  for (std::size_t n = 1; n <= sample.N; ++n) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < r; ++j) {
      const BigInt c = (sample.mantissa(n, j) * P) >> kOrbitBits;
      key = key * P + c.convert_to<std::uint64_t>();
    }
    ++counts[key];
  }
  BoxReport rep;
  rep.P = P;
  rep.k_rel = k_rel;
  rep.boxes_hit = counts.size();
  for (const auto& [key, c] : counts) rep.max_count = std::max(rep.max_count, c);
  rep.max_occupancy = static_cast<double>(rep.max_count) / static_cast<double>(sample.N);
  rep.bound_ratio = rep.max_occupancy * std::pow(static_cast<double>(P),
                                                 static_cast<double>(r - k_rel));
  return rep;
}

// ---------------------------------------------------------------------------
// bounded-height relation search

namespace {

struct ThetaView {
  std::vector<double> d;
  std::vector<FixedReal> hp;
};

ThetaView make_thetas(const PrimeSet& primes) {
  ThetaView tv;
  for (auto p : primes.primes) {
    const FixedReal f = log2_over_logp(p, 256);
    tv.hp.push_back(f);
    tv.d.push_back(f.to_double());
  }
  return tv;
}

// certified residual check; pushes a hit when |residual| < tol
void certify_candidate(const ThetaView& tv, const std::vector<std::int64_t>& n,
                       std::int64_t height, double tol, std::vector<RelationHit>& hits) {
  FixedReal acc = FixedReal::exact_int(0, 256);
  for (std::size_t j = 0; j < tv.hp.size(); ++j)
    if (n[j] != 0) acc = acc + tv.hp[j].mul_int(n[j]);
  // nearest integer
  const FixedReal half = FixedReal::from_ratio(1, 2, 256);
  const BigInt m = (acc + half).floor_certified("relation_search");
  if (m > height || m < -height) return;
  FixedReal res = acc - FixedReal::exact_int(m, 256);
  if (res.to_double() < 0) res = -res;
  const FixedReal tol_f = FixedReal::from_double(tol, 256);
  if (res.definitely_greater(tol_f)) return;
  if (!res.definitely_less(tol_f))
    throw PrecisionExhausted("relation_search: residual indistinguishable from tol at 256 bits");
  RelationHit hit;
  hit.coeffs = n;
  hit.coeffs.push_back(m.convert_to<std::int64_t>());
  hit.residual = std::abs(res.to_double());
  hits.push_back(std::move(hit));
}

}  // namespace

std::vector<RelationHit> relation_search(const PrimeSet& primes, std::int64_t height, double tol) {
  if (height < 1) throw std::invalid_argument("relation_search: height must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("relation_search: tol must be positive");
  const std::size_t r = primes.r();
  const ThetaView tv = make_thetas(primes);
  const double span = static_cast<double>(2 * height + 1);
  const double space = std::pow(span, static_cast<double>(r));
  std::vector<RelationHit> hits;
  const double margin = tol + 1e-9;

  if (space <= 2.0e6) {
    // direct odometer scan
    std::vector<std::int64_t> n(r, -height);
    while (true) {
      double sum = 0;
      bool zero = true;
      for (std::size_t j = 0; j < r; ++j) {
        if (n[j] != 0) zero = false;
        sum += static_cast<double>(n[j]) * tv.d[j];
      }
      if (!zero) {
        const double res = std::abs(sum - std::round(sum));
        if (res < margin) certify_candidate(tv, n, height, tol, hits);
      }
      std::size_t j = 0;
      while (j < r && n[j] == height) n[j++] = -height;
      if (j == r) break;
      ++n[j];
    }
  } else {
    if (tol > 1e-6)
      throw std::invalid_argument("relation_search: loose tolerance on a large space; shrink one");
    // meet in the middle: sort fractional parts of the first-half sums
    const std::size_t ra = (r + 1) / 2, rb = r - ra;
    const std::size_t na = static_cast<std::size_t>(std::pow(span, static_cast<double>(ra)));
    std::vector<std::pair<double, std::uint64_t>> afrac(na);
    {
      std::vector<std::int64_t> n(ra, -height);
      for (std::size_t idx = 0;; ++idx) {
        double sum = 0;
        for (std::size_t j = 0; j < ra; ++j) sum += static_cast<double>(n[j]) * tv.d[j];
        afrac[idx] = {sum - std::floor(sum), idx};
        std::size_t j = 0;
        while (j < ra && n[j] == height) n[j++] = -height;
        if (j == ra) break;
        ++n[j];
      }
    }
    std::sort(afrac.begin(), afrac.end());
    auto decode = [&](std::uint64_t idx, std::size_t dim) {
      std::vector<std::int64_t> n(dim);
      const std::uint64_t base = static_cast<std::uint64_t>(span);
      for (std::size_t j = 0; j < dim; ++j) {
        n[j] = static_cast<std::int64_t>(idx % base) - height;
        idx /= base;
      }
      return n;
    };
    auto probe = [&](double target, std::uint64_t bidx, const std::vector<std::int64_t>& nb) {
      // find afrac values within margin of target (mod 1)
      for (int wrap = -1; wrap <= 1; ++wrap) {
        const double lo = target + wrap - margin, hi = target + wrap + margin;
        auto it = std::lower_bound(afrac.begin(), afrac.end(), std::make_pair(lo, std::uint64_t(0)));
        for (; it != afrac.end() && it->first <= hi; ++it) {
          std::vector<std::int64_t> n = decode(it->second, ra);
          n.insert(n.end(), nb.begin(), nb.end());
          if (std::all_of(n.begin(), n.end(), [](std::int64_t v) { return v == 0; })) continue;
          certify_candidate(tv, n, height, tol, hits);
        }
      }
      (void)bidx;
    };
    std::vector<std::int64_t> nb(rb, -height);
    for (std::uint64_t bidx = 0;; ++bidx) {
      double sum = 0;
      for (std::size_t j = 0; j < rb; ++j) sum += static_cast<double>(nb[j]) * tv.d[ra + j];
      const double f = sum - std::floor(sum);
      // want frac(A) + frac-ish(B) near an integer: target = -f mod 1
      probe(1.0 - f, bidx, nb);
      std::size_t j = 0;
      while (j < rb && nb[j] == height) nb[j++] = -height;
      if (j == rb) break;
      ++nb[j];
    }
    // meet-in-the-middle can see the same vector only once (the halves are a
    // partition), so no dedup is needed
  }

  std::sort(hits.begin(), hits.end(), [](const RelationHit& a, const RelationHit& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    return a.coeffs < b.coeffs;
  });
  return hits;
}

// ---------------------------------------------------------------------------
// relation systems and curve families

RelationSystem reduce_relations(const std::vector<std::vector<BigRat>>& rows, std::size_t r) {
  if (r < 1) throw std::invalid_argument("reduce_relations: r must be >= 1");
  for (const auto& row : rows)
    if (row.size() != r + 1)
      throw std::invalid_argument("reduce_relations: each row needs r+1 entries");
  const std::size_t k = rows.size();
  if (k >= r)
    throw std::invalid_argument(
        "reduce_relations: r independent relations would make every log2/logp rational, which "
        "fails because no power of 2 equals a power of an odd prime; k must be <= r-1");

  // Gaussian elimination, pivots chosen from the highest coordinate column
  std::vector<std::vector<BigRat>> m = rows;
  std::vector<std::size_t> pivot_col(k);
  std::vector<bool> used(r, false);
  for (std::size_t i = 0; i < k; ++i) {
    // eliminate previous pivots from row i
    for (std::size_t p = 0; p < i; ++p) {
      const BigRat f = m[i][pivot_col[p]];
      if (f != 0)
        for (std::size_t c = 0; c <= r; ++c) m[i][c] -= f * m[p][c];
    }
    std::size_t pc = r;  // sentinel
    for (std::size_t c = r; c-- > 0;) {
      if (!used[c] && m[i][c] != 0) {
        pc = c;
        break;
      }
    }
    if (pc == r)
      throw std::invalid_argument("reduce_relations: row " + std::to_string(i + 1) +
                                  " is dependent on the earlier rows");
    pivot_col[i] = pc;
    used[pc] = true;
    const BigRat inv = BigRat(1) / m[i][pc];
    for (std::size_t c = 0; c <= r; ++c) m[i][c] *= inv;
  }
  // back-substitute to clear pivot columns from other rows
  for (std::size_t i = k; i-- > 0;) {
    for (std::size_t o = 0; o < k; ++o) {
      if (o == i) continue;
      const BigRat f = m[o][pivot_col[i]];
      if (f != 0)
        for (std::size_t c = 0; c <= r; ++c) m[o][c] -= f * m[i][c];
    }
  }

  RelationSystem sys;
  sys.r = r;
  sys.k = k;
  // free columns in ascending order, then pivots: row j's pivot sits at
  // permuted position r - j (1-based j)
  for (std::size_t c = 0; c < r; ++c)
    if (!used[c]) sys.perm.push_back(c);
  const std::size_t f_count = sys.perm.size();
  sys.perm.resize(r);
  for (std::size_t j = 1; j <= k; ++j) sys.perm[r - j] = pivot_col[j - 1];

  for (std::size_t j = 1; j <= k; ++j) {
    const auto& row = m[j - 1];
    std::vector<BigRat> b;
    // theta_pivot = sum_free (-coef) theta_free + rhs
    for (std::size_t h = 0; h < f_count; ++h) b.push_back(-row[sys.perm[h]]);
    b.push_back(row[r]);  // constant
    BigInt den = 1;
    for (const auto& q : b)
      den = boost::multiprecision::lcm(den, BigInt(boost::multiprecision::denominator(q)));
    std::vector<BigInt> nums;
    for (const auto& q : b)
      nums.push_back(BigInt(boost::multiprecision::numerator(q)) *
                     (den / BigInt(boost::multiprecision::denominator(q))));
    sys.b.push_back(std::move(b));
    sys.denoms.push_back(den);
    sys.nums.push_back(std::move(nums));
  }
  return sys;
}

namespace {

// evaluate theta_i at (t_1..t_f) = (1, L, L^2, ...)
BigRat rho_at(const RelationSystem& sys, std::size_t row, const BigInt& L) {
  const std::size_t f = sys.r - sys.k;
  BigRat acc = 0;
  BigInt Lp = 1;
  for (std::size_t h = 0; h < f; ++h) {
    acc += sys.b[row][h] * BigRat(Lp);
    Lp *= L;
  }
  return acc;
}

BigRat rat_abs(const BigRat& q) { return q < 0 ? BigRat(-q) : q; }

std::int64_t floor_rat(const BigRat& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  BigInt fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;
  return fl.convert_to<std::int64_t>();
}

std::int64_t ceil_rat(const BigRat& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  BigInt cl = num / den;
  if (num > 0 && cl * den != num) cl += 1;
  return cl.convert_to<std::int64_t>();
}

// exact check that q_i log p_i != q_j log p_j for nonzero rational rates
void require_distinct_bases(std::uint64_t pi, const BigRat& qi, std::uint64_t pj,
                            const BigRat& qj) {
  if ((qi < 0) != (qj < 0)) return;  // opposite signs cannot collide
  const BigInt ai = boost::multiprecision::numerator(rat_abs(qi));
  const BigInt bi = boost::multiprecision::denominator(rat_abs(qi));
  const BigInt aj = boost::multiprecision::numerator(rat_abs(qj));
  const BigInt bj = boost::multiprecision::denominator(rat_abs(qj));
  // q_i log p_i = q_j log p_j  <=>  p_i^(a_i b_j) = p_j^(a_j b_i)
  const BigInt e1 = ai * bj, e2 = aj * bi;
  if (e1 > 4096 || e2 > 4096) return;  // enormous exponents cannot collide for distinct primes
  if (pow_u(BigInt(pi), e1.convert_to<std::uint64_t>()) ==
      pow_u(BigInt(pj), e2.convert_to<std::uint64_t>()))
    throw std::logic_error("make_curves: coincident curve exponent bases");
}

}  // namespace

CurveFamily make_curves(const RelationSystem& sys, const PrimeSet& primes) {
  if (primes.r() != sys.r) throw std::invalid_argument("make_curves: prime count mismatch");
  CurveFamily fam;
  const std::size_t r = sys.r, k = sys.k, f = r - k;

  if (k == 0) {
    fam.box_only = true;
    fam.L = 1;
    fam.shift_bound = 0;
    fam.L_bound = 0;
    fam.I_bound = 0;
    for (std::size_t h = 0; h < r; ++h) {
      CoordCurve c;
      c.prime = primes.primes[h];
      c.rate = 1;
      fam.coords.push_back(std::move(c));
    }
    return fam;
  }

  BigInt max_m = 0;
  BigInt lcm_n = 1;
  for (std::size_t j = 0; j < k; ++j) {
    lcm_n = boost::multiprecision::lcm(lcm_n, sys.denoms[j]);
    for (const auto& m : sys.nums[j]) max_m = std::max(max_m, BigInt(abs(m)));
  }
  fam.L_bound = 2 * lcm_n * max_m;

  if (f == 1) {
    // single free parameter: no deltas, rho_i is forced; a zero rho means a
    // constant coordinate, which no L can repair
    fam.L = 1;
  } else {
    BigInt L = 1;
    for (;; ++L) {
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j)
        if (rho_at(sys, j, L) == 0) ok = false;
      if (ok) break;
      if (fam.L_bound != 0 && L > fam.L_bound)
        throw std::logic_error("make_curves: no admissible L within the bound");
    }
    fam.L = L.convert_to<std::uint64_t>();
  }

  // rho_i corresponds to permuted coordinate position r-k+i-1, which uses
  // row k-i+1; collect in coordinate order (i = 1..k -> row k-i)
  for (std::size_t i = 1; i <= k; ++i) {
    const BigRat rho = rho_at(sys, k - i, BigInt(fam.L));
    if (rho == 0)
      throw std::logic_error("make_curves: a dependent coordinate has zero exponent rate");
    fam.rho.push_back(rho);
  }

  fam.I_bound = BigInt(r) * pow_u(BigInt(fam.L), r) * max_m;
  if (r == 2 && k == 1) {
    fam.shift_bound = 3 * sys.denoms[0] * sys.denoms[0];
  } else {
    BigRat dmax = 0;
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t h = 0; h + 1 < sys.nums[j].size(); ++h)
        dmax = std::max(dmax, BigRat(BigInt(abs(sys.nums[j][h])), sys.denoms[j]));
    const BigInt delta = 1 + BigInt(r) * BigInt(floor_rat(dmax));
    BigInt sum_n = 0;
    for (const auto& n : sys.denoms) sum_n += n;
    fam.shift_bound = sum_n * (2 * delta + 1);
  }

  // coordinate specs
  for (std::size_t pos = 0; pos < r; ++pos) {
    CoordCurve c;
    c.prime = primes.primes[sys.perm[pos]];
    if (pos == 0) {
      c.rate = 1;
      c.dilate_lo = c.dilate_hi = 0;
    } else if (pos < f) {
      // t_pos = L^pos * t + delta_{pos}; exponent spans [0, L^pos + 1)
      c.rate = BigRat(pow_u(BigInt(fam.L), pos));
      c.dilate_lo = 0;
      c.dilate_hi = ceil_rat(c.rate + 1) - 1;
    } else {
      const std::size_t i = pos - f + 1;  // 1..k
      c.dependent = true;
      c.rate = fam.rho[i - 1];
      // exponent = rho * t + sum_h coef_h * delta_h over t, delta in [0,1)
      BigRat inf = std::min(BigRat(0), c.rate);
      BigRat sup = std::max(BigRat(0), c.rate);
      const std::size_t row = k - i;
      for (std::size_t h = 1; h < f; ++h) {
        const BigRat coef = sys.b[row][h];
        inf += std::min(BigRat(0), coef);
        sup += std::max(BigRat(0), coef);
      }
      c.dilate_lo = floor_rat(inf);
      c.dilate_hi = ceil_rat(sup) - 1;
    }
    fam.coords.push_back(std::move(c));
  }

  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      require_distinct_bases(fam.coords[i].prime, fam.coords[i].rate, fam.coords[j].prime,
                             fam.coords[j].rate);
  return fam;
}

CoverReport verify_curve_cover(const RelationSystem& sys, const std::vector<BigRat>& thetas,
                               std::size_t N, const BigRat& tol) {
  if (thetas.size() != sys.r) throw std::invalid_argument("verify_curve_cover: theta count");
  CoverReport rep;
  rep.N = N;
  const std::size_t f = sys.r - sys.k;
  for (std::size_t n = 1; n <= N; ++n) {
    bool on_curve = true;
    std::vector<BigRat> free_frac(f);
    for (std::size_t h = 0; h < f; ++h) free_frac[h] = frac_rat(BigRat(n) * thetas[sys.perm[h]]);
    for (std::size_t j = 1; j <= sys.k && on_curve; ++j) {
      const BigRat lhs = frac_rat(BigRat(n) * thetas[sys.perm[sys.r - j]]);
      BigRat rhs = 0;
      for (std::size_t h = 0; h < f; ++h) rhs += sys.b[j - 1][h] * free_frac[h];
      // shift classes are the multiples of 1/n_j: distance to the grid is
      // ||n_j (lhs - rhs)|| / n_j
      const BigRat nj(sys.denoms[j - 1]);
      const BigRat d = dist_to_int(nj * (lhs - rhs)) / nj;
      if (d > tol) on_curve = false;
    }
    if (!on_curve) {
      ++rep.misses;
      if (rep.miss_samples.size() < 16) rep.miss_samples.push_back(n);
    }
  }
  return rep;
}

std::vector<BigRat> synth_thetas(const RelationSystem& sys, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BigRat> thetas(sys.r);
  const std::size_t f = sys.r - sys.k;
  for (std::size_t h = 0; h < f; ++h) {
    BigInt num = 0;
    for (int w = 0; w < 2; ++w) num = (num << 64) | rng.next_u64();
    num |= 1;
    thetas[sys.perm[h]] = BigRat(num, BigInt(1) << 128);
  }
  for (std::size_t j = 1; j <= sys.k; ++j) {
    BigRat v = sys.b[j - 1][f];  // constant
    for (std::size_t h = 0; h < f; ++h) v += sys.b[j - 1][h] * thetas[sys.perm[h]];
    thetas[sys.perm[sys.r - j]] = v;
  }
  return thetas;
}

}  // namespace lowmult
