#include "lowmult/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "lowmult/dft.hpp"

namespace lowmult {

namespace {

double pow_p(std::uint64_t P, double e) { return std::pow(static_cast<double>(P), e); }

std::uint64_t binom_small(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n + 1 - i) / i;
  return r;
}

}  // namespace

CurveSpec CurveSpec::orbit_curve(const PrimeSet& ps) {
  CurveSpec c;
  for (std::uint64_t p : ps.primes) {
    c.theta.push_back(static_cast<double>(p));
    c.zeta.push_back(1.0 / static_cast<double>(p));
  }
  return c;
}

CurveSpec CurveSpec::alternating_curve(std::size_t r) {
  if (r < 2) throw std::invalid_argument("alternating_curve: needs r >= 2");
  CurveSpec c;
  for (std::size_t j = 1; j <= r; ++j) {
    c.theta.push_back(std::pow(0.5, static_cast<double>(j)));
    const double z = static_cast<double>(binom_small(r - 1, j - 1));
    c.zeta.push_back((j % 2 == 1) ? z : -z);
  }
  return c;
}

void CurveSpec::validate() const {
  if (zeta.size() != theta.size() || zeta.empty())
    throw std::invalid_argument("curve: zeta/theta size mismatch");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0) || theta[i] == 1.0)
      throw std::invalid_argument("curve: thetas must be positive and != 1");
    if (zeta[i] == 0.0) throw std::invalid_argument("curve: zetas must be nonzero");
    for (std::size_t j = i + 1; j < theta.size(); ++j)
      if (theta[i] == theta[j]) throw std::invalid_argument("curve: thetas must be distinct");
  }
}

std::vector<std::uint32_t> build_A(std::uint64_t p, std::uint64_t P, unsigned H) {
  require_odd_prime(p);
  if (H < 1) throw std::invalid_argument("build_A: H must be >= 1");
  if (!is_prime(BigInt(P))) throw std::invalid_argument("build_A: P must be prime");
  if (BigInt(P) <= pow_u(BigInt(p), 2 * H))
    throw std::invalid_argument("build_A: requires P > p^(2H)");

  const std::uint64_t d_count = (p + 9) / 10;  // digits 0 <= d < p/10
  std::vector<std::uint64_t> ceils(H);
  BigInt pk = 1;
  for (unsigned i = 0; i < H; ++i) {
    pk *= p;
    ceils[i] = ((BigInt(P) + pk - 1) / pk).convert_to<std::uint64_t>();
  }
  const std::uint64_t interval = ceils[H - 1];  // ceil(P / p^H)

  std::vector<std::uint64_t> combos{0};
  for (unsigned i = 0; i < H; ++i) {
    std::vector<std::uint64_t> next;
    next.reserve(combos.size() * d_count);
    for (std::uint64_t base : combos)
      for (std::uint64_t d = 0; d < d_count; ++d) next.push_back((base + d * ceils[i]) % P);
    combos = std::move(next);
  }

  std::vector<bool> seen(P, false);
  std::vector<std::uint32_t> out;
  std::uint64_t expressions = 0;
  for (std::uint64_t base : combos) {
    for (std::uint64_t x = 0; x < interval; ++x) {
      const std::uint64_t v = (base + x) % P;
      ++expressions;
      if (seen[v])
        throw std::logic_error("build_A: digit expressions collide mod P (P too small)");
      seen[v] = true;
      out.push_back(static_cast<std::uint32_t>(v));
    }
  }
  (void)expressions;
  std::sort(out.begin(), out.end());
  return out;
}

FourierInstance build_instance(const PrimeSet& ps, std::uint64_t P, unsigned H, CurveSpec curve,
                               double epsilon_override,
                               std::vector<std::vector<std::uint32_t>> custom_A) {
  FourierInstance inst;
  inst.P = P;
  inst.H = H;
  if (!is_prime(BigInt(P))) throw std::invalid_argument("build_instance: P must be prime");

  if (!custom_A.empty()) {
    inst.A = std::move(custom_A);
    inst.r = inst.A.size();
  } else {
    inst.base_primes = ps;
    inst.r = ps.r();
    if (BigInt(P) <= pow_u(BigInt(ps.largest()), 2 * H))
      throw std::invalid_argument("build_instance: requires P > (max p)^(2H)");
    for (std::uint64_t p : ps.primes) inst.A.push_back(build_A(p, P, H));
  }

  inst.epsilon = epsilon_override > 0
                     ? epsilon_override
                     : static_cast<double>(H) * std::log(10.0) / std::log(static_cast<double>(P));
  inst.out_of_regime =
      inst.epsilon >= 1.0 / (20.0 * static_cast<double>(inst.r) * static_cast<double>(inst.r));

  // |A_j| >= P^(1-eps) = P/10^H when eps saturates the defining inequality
  const double min_size = pow_p(P, 1.0 - inst.epsilon);
  for (const auto& a : inst.A)
    if (static_cast<double>(a.size()) < min_size - 1e-9)
      throw std::invalid_argument("build_instance: |A_j| below P^(1-eps)");

  if (curve.zeta.empty()) {
    if (inst.base_primes.primes.empty())
      throw std::invalid_argument("build_instance: custom A sets need an explicit curve");
    curve = CurveSpec::orbit_curve(inst.base_primes);
  }
  curve.validate();
  if (curve.r() != inst.r) throw std::invalid_argument("build_instance: curve dimension mismatch");
  inst.curve = std::move(curve);

  const double rr = static_cast<double>(inst.r);
  inst.q_threshold = pow_p(P, rr * (1.0 - 3.0 * inst.epsilon));
  inst.qp_box = pow_p(P, 1.0 - 6.0 * rr * inst.epsilon);
  inst.e_norm_bound = pow_p(P, -8.0 * rr * rr * inst.epsilon);
  const double drange = pow_p(P, 7.0 * rr * inst.epsilon);
  inst.delta_saturated = drange >= static_cast<double>(P);
  inst.delta_range =
      inst.delta_saturated ? P - 1 : static_cast<std::uint64_t>(std::floor(drange));

  discretize_curve(inst);
  spectrum(inst);
  exceptional_set(inst);
  return inst;
}

void discretize_curve(FourierInstance& inst) {
  const std::size_t r = inst.r;
  const double P = static_cast<double>(inst.P);
  // step small enough that every coordinate moves well under one cell
  double max_rate = 0;
  for (std::size_t i = 0; i < r; ++i) {
    const double m = std::abs(inst.curve.zeta[i]) * std::abs(std::log(inst.curve.theta[i])) *
                     std::max(1.0, inst.curve.theta[i]);
    max_rate = std::max(max_rate, m);
  }
  const double steps_d = std::ceil(4.0 * std::max(1.0, std::log(P)) * P * std::max(1.0, max_rate));
  if (steps_d > 5e7) throw std::invalid_argument("discretize_curve: instance too large");
  const std::uint64_t steps = static_cast<std::uint64_t>(steps_d);

  std::set<std::vector<std::uint32_t>> cells;
  std::vector<std::pair<std::vector<std::uint32_t>, double>> order;
  for (std::uint64_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps);
    std::vector<std::uint32_t> x(r);
    for (std::size_t i = 0; i < r; ++i) {
      const double v = inst.curve.zeta[i] * std::pow(inst.curve.theta[i], t);
      double f = v - std::floor(v);  // wrap into [0,1)
      std::uint64_t cell = static_cast<std::uint64_t>(f * P);
      if (cell >= inst.P) cell = inst.P - 1;
      x[i] = static_cast<std::uint32_t>(cell);
    }
    if (cells.insert(x).second) order.emplace_back(std::move(x), t);
  }
  inst.F.clear();
  inst.F_t.clear();
  for (auto& [x, t] : order) {
    inst.F.push_back(std::move(x));
    inst.F_t.push_back(t);
  }
  inst.f_large_enough =
      static_cast<double>(inst.F.size()) > P / std::max(1.0, std::log(P));
}

void spectrum(FourierInstance& inst) {
  const std::size_t r = inst.r;
  const std::uint64_t P = inst.P;
  // per-coordinate magnitudes, sorted descending for the product search
  std::vector<std::vector<double>> mags(r);
  std::vector<std::vector<std::uint32_t>> idx(r);
  for (std::size_t j = 0; j < r; ++j) {
    mags[j] = indicator_dft_mags(inst.A[j], P);
    idx[j].resize(P);
    std::iota(idx[j].begin(), idx[j].end(), 0u);
    std::sort(idx[j].begin(), idx[j].end(),
              [&](std::uint32_t a, std::uint32_t b) { return mags[j][a] > mags[j][b]; });
  }

  constexpr std::size_t kQCap = 2000000;
  inst.Q.clear();
  std::vector<std::int64_t> cur(r);
  // depth-first product enumeration over magnitude-sorted frequencies: once
  // the best completion of a prefix falls below the threshold, the whole
  // branch is done
  std::vector<double> best_suffix(r + 1, 1.0);
  for (std::size_t j = r; j-- > 0;)
    best_suffix[j] = best_suffix[j + 1] * mags[j][idx[j][0]];

    struct Frame {
    std::size_t pos = 0;  // index into idx[depth]
  };
  std::vector<Frame> stack(r + 1);
  std::vector<double> prod(r + 1, 1.0);
  std::size_t depth = 0;
  stack[0].pos = 0;
  while (true) {
    if (depth == r) {
      for (std::size_t j = 0; j < r; ++j) {
        const std::uint32_t s = idx[j][stack[j].pos - 1];
        cur[j] = static_cast<std::int64_t>(s) <= static_cast<std::int64_t>(P / 2)
                     ? static_cast<std::int64_t>(s)
                     : static_cast<std::int64_t>(s) - static_cast<std::int64_t>(P);
      }
      inst.Q.push_back(cur);
      if (inst.Q.size() > kQCap)
        throw std::runtime_error("spectrum: large spectrum exceeds the enumeration cap");
      --depth;
      continue;
    }
    if (stack[depth].pos >= P) {
      if (depth == 0) break;
      --depth;
      continue;
    }
    const std::uint32_t s = idx[depth][stack[depth].pos];
    const double m = mags[depth][s];
    if (prod[depth] * m * best_suffix[depth + 1] < inst.q_threshold) {
      // sorted order: no later frequency at this depth can reach the threshold
      if (depth == 0) break;
      stack[depth].pos = 0;
      --depth;
      continue;
    }
    ++stack[depth].pos;
    prod[depth + 1] = prod[depth] * m;
    ++depth;
    if (depth < r) stack[depth].pos = 0;
  }

  std::sort(inst.Q.begin(), inst.Q.end());
  inst.Qp.clear();
  for (const auto& s : inst.Q) {
    bool in_box = true;
    for (std::int64_t c : s)
      if (std::abs(static_cast<double>(c)) > inst.qp_box + 1e-12) in_box = false;
    if (in_box) inst.Qp.push_back(s);
  }
}

void exceptional_set(FourierInstance& inst) {
  inst.E.clear();
  std::vector<std::vector<std::int64_t>> qs;
  for (const auto& s : inst.Qp)
    if (std::any_of(s.begin(), s.end(), [](std::int64_t v) { return v != 0; })) qs.push_back(s);
  if (qs.empty()) return;  // only the zero frequency: E is empty
  const double P = static_cast<double>(inst.P);
  for (std::size_t i = 0; i < inst.F.size(); ++i) {
    for (const auto& s : qs) {
      std::int64_t dot = 0;
      for (std::size_t j = 0; j < inst.r; ++j)
        dot += static_cast<std::int64_t>(inst.F[i][j]) * s[j];
      std::int64_t m = dot % static_cast<std::int64_t>(inst.P);
      if (m < 0) m += static_cast<std::int64_t>(inst.P);
      const double norm = std::min(static_cast<double>(m), P - static_cast<double>(m)) / P;
      if (norm < inst.e_norm_bound) {
        inst.E.push_back(i);
        break;
      }
    }
  }
}

namespace {

// indicator of A+A+A as a 0/1 table over F_P
std::vector<std::uint8_t> triple_sumset(const std::vector<std::uint32_t>& A, std::uint64_t P) {
  std::vector<std::uint8_t> one(P, 0), two(P, 0), three(P, 0);
  for (auto a : A) one[a] = 1;
  for (auto a : A)
    for (std::uint64_t v = 0; v < P; ++v)
      if (one[v]) two[(v + a) % P] = 1;
  for (std::uint64_t v = 0; v < P; ++v)
    if (two[v])
      for (auto a : A) three[(v + a) % P] = 1;
  return three;
}

// reachable[y] = 1 iff (y - delta) mod P is in the set for some 0 <= delta <= D
std::vector<std::uint8_t> dilate_window(const std::vector<std::uint8_t>& set, std::uint64_t P,
                                        std::uint64_t D) {
  if (D >= P - 1) return std::vector<std::uint8_t>(P, 1);
  // difference-array sweep over the circle
  std::vector<std::int32_t> diff(P + 1, 0);
  for (std::uint64_t v = 0; v < P; ++v) {
    if (!set[v]) continue;
    const std::uint64_t lo = v, hi = v + D;  // covers [v, v+D] mod P
    if (hi < P) {
      ++diff[lo];
      --diff[hi + 1];
    } else {
      ++diff[lo];
      --diff[P];
      ++diff[0];
      --diff[hi - P + 1];
    }
  }
  std::vector<std::uint8_t> out(P, 0);
  std::int32_t acc = 0;
  for (std::uint64_t v = 0; v < P; ++v) {
    acc += diff[v];
    out[v] = acc > 0;
  }
  return out;
}

}  // namespace

ConclusionReport verify_conclusion(const FourierInstance& inst, std::size_t trials,
                                   std::uint64_t seed, bool sample_exceptional) {
  if (trials < 1) throw std::invalid_argument("verify_conclusion: trials must be >= 1");
  ConclusionReport rep;
  rep.trials = trials;
  rep.delta_saturated = inst.delta_saturated;

  // windowed triple sumsets, one per coordinate
  std::vector<std::vector<std::uint8_t>> ok(inst.r);
  for (std::size_t j = 0; j < inst.r; ++j)
    ok[j] = dilate_window(triple_sumset(inst.A[j], inst.P), inst.P, inst.delta_range);

  // candidate x pool
  std::vector<std::size_t> pool;
  {
    std::vector<std::uint8_t> in_e(inst.F.size(), 0);
    for (auto i : inst.E) in_e[i] = 1;
    for (std::size_t i = 0; i < inst.F.size(); ++i)
      if (static_cast<bool>(in_e[i]) == sample_exceptional) pool.push_back(i);
  }
  if (pool.empty()) throw std::invalid_argument("verify_conclusion: empty sample pool");

  const double rr = static_cast<double>(inst.r);
  const double nb = pow_p(inst.P, 10.0 * rr * rr * inst.epsilon);
  const std::uint64_t n_max =
      nb >= static_cast<double>(inst.P) ? inst.P : static_cast<std::uint64_t>(std::floor(nb));

  Rng rng(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto& x = inst.F[pool[rng.below(pool.size())]];
    std::vector<std::uint64_t> beta(inst.r);
    for (auto& b : beta) b = rng.below(inst.P);
    std::uint64_t least = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      bool all = true;
      for (std::size_t j = 0; j < inst.r; ++j) {
        const std::uint64_t y = (n * x[j] + beta[j]) % inst.P;
        if (!ok[j][y]) {
          all = false;
          break;
        }
      }
      if (all) {
        least = n;
        break;
      }
    }
    rep.least_n.push_back(least);
    if (least != 0) ++rep.successes;
  }
  rep.success_rate = static_cast<double>(rep.successes) / static_cast<double>(trials);
  return rep;
}

RemarkReport counterexample_remark(std::size_t r, std::uint64_t P, double epsilon,
                                   std::size_t t_samples) {
  if (r < 2) throw std::invalid_argument("counterexample_remark: needs r >= 2");
  if (!is_prime(BigInt(P))) throw std::invalid_argument("counterexample_remark: P must be prime");
  if (!(epsilon > 0 && epsilon < 0.5))
    throw std::invalid_argument("counterexample_remark: epsilon out of range");
  RemarkReport rep;
  rep.r = r;
  rep.P = P;
  rep.epsilon = epsilon;
  const double rr = static_cast<double>(r);
  rep.interval_top =
      static_cast<std::uint64_t>(std::floor(pow_p(P, 1.0 - rr * epsilon) / 3.0));
  rep.n_bound = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::floor(pow_p(P, rr * (rr - 1.0) * epsilon / 2.0))));
  rep.t_max = pow_p(P, -rr * epsilon);
  rep.samples = t_samples;

  const CurveSpec curve = CurveSpec::alternating_curve(r);
  const std::uint64_t coord_top = 3 * rep.interval_top;      // 3A_i = [0, coord_top]
  const std::uint64_t sum_top = coord_top * r;               // range of Sum y_i

  for (std::size_t si = 1; si <= t_samples; ++si) {
    const double t = rep.t_max * static_cast<double>(si) / static_cast<double>(t_samples);
    std::vector<std::uint64_t> x(r);
    std::uint64_t dot = 0;
    for (std::size_t i = 0; i < r; ++i) {
      const double v = curve.zeta[i] * std::pow(curve.theta[i], t);
      const double f = v - std::floor(v);
      std::uint64_t cell = static_cast<std::uint64_t>(f * static_cast<double>(P));
      if (cell >= P) cell = P - 1;
      x[i] = cell;
      dot = (dot + cell) % P;
    }
    for (std::uint64_t n = 1; n <= rep.n_bound; ++n) {
      ++rep.pairs_checked;
      if ((n * dot) % P <= sum_top) ++rep.dot_collisions;
      bool vec = true;
      for (std::size_t i = 0; i < r && vec; ++i)
        if ((n * x[i]) % P > coord_top) vec = false;
      if (vec) ++rep.vector_collisions;
    }
    // first vector collision beyond the n bound, reported once
    if (rep.first_fail_n == 0) {
      for (std::uint64_t n = rep.n_bound + 1; n <= std::min<std::uint64_t>(P, rep.n_bound + 65536);
           ++n) {
        bool vec = true;
        for (std::size_t i = 0; i < r && vec; ++i)
          if ((n * x[i]) % P > coord_top) vec = false;
        if (vec) {
          rep.first_fail_n = n;
          rep.first_fail_t = t;
          break;
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// exponential-sum lemma

namespace {

double lemma_constant(std::vector<double> bases, std::vector<double> coeffs) {
  const std::size_t r = bases.size();
  if (r == 1) return std::min(1.0, bases[0]);
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < r; ++i)
    if (std::abs(coeffs[i]) > std::abs(coeffs[i0])) i0 = i;
  const std::size_t j0 = (i0 == 0) ? 1 : 0;
  std::vector<double> sb, sc;
  double min_log = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r; ++k) {
    if (k == j0) continue;
    const double ratio = bases[k] / bases[j0];
    sb.push_back(ratio);
    sc.push_back(coeffs[k] * std::log(ratio));
    min_log = std::min(min_log, std::abs(std::log(ratio)));
  }
  return lemma_constant(std::move(sb), std::move(sc)) * min_log * std::min(1.0, bases[j0]);
}

}  // namespace

LemmaResult lemma_lower_bound(const LemmaInstance& inst) {
  const std::size_t r = inst.bases.size();
  if (r == 0 || inst.coeffs.size() != r)
    throw std::invalid_argument("lemma: bases/coeffs mismatch");
  if (inst.grid.size() != (std::size_t(1) << r))
    throw std::invalid_argument("lemma: grid must have 2^r points");
  for (std::size_t i = 0; i < r; ++i) {
    if (!(inst.bases[i] > 0)) throw std::invalid_argument("lemma: bases must be positive");
    if (inst.coeffs[i] == 0) throw std::invalid_argument("lemma: coefficients must be nonzero");
    for (std::size_t j = i + 1; j < r; ++j)
      if (inst.bases[i] == inst.bases[j])
        throw std::invalid_argument("lemma: bases must be distinct");
  }
  LemmaResult res;
  res.delta = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < inst.grid.size(); ++j) {
    if (!(inst.grid[j] > 0 && inst.grid[j] < 1))
      throw std::invalid_argument("lemma: grid points must lie in (0,1)");
    if (j > 0) {
      if (!(inst.grid[j] > inst.grid[j - 1]))
        throw std::invalid_argument("lemma: grid must increase");
      res.delta = std::min(res.delta, inst.grid[j] - inst.grid[j - 1]);
    }
  }
  for (std::size_t j = 0; j < inst.grid.size(); ++j) {
    double h = 0;
    for (std::size_t i = 0; i < r; ++i)
      h += inst.coeffs[i] * std::pow(inst.bases[i], inst.grid[j]);
    if (std::abs(h) > res.max_abs) {
      res.max_abs = std::abs(h);
      res.argmax = j;
    }
  }
  double cmax = 0;
  for (double c : inst.coeffs) cmax = std::max(cmax, std::abs(c));
  res.constant = lemma_constant(inst.bases, inst.coeffs);
  res.bound = std::pow(res.delta, static_cast<double>(r - 1)) * res.constant * cmax;
  res.holds = res.max_abs >= res.bound;
  return res;
}

LemmaInstance random_lemma_instance(Rng& rng, std::size_t r) {
  if (r < 1 || r > 8) throw std::invalid_argument("random_lemma_instance: r out of range");
  LemmaInstance inst;
  while (inst.bases.size() < r) {
    const double x = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
    bool ok = true;
    for (double b : inst.bases)
      if (std::abs(std::log(x / b)) < 0.05) ok = false;
    if (ok) inst.bases.push_back(x);
  }
  for (std::size_t i = 0; i < r; ++i) {
    double c = rng.uniform(-10.0, 10.0);
    if (std::abs(c) < 0.01) c = c < 0 ? -0.01 : 0.01;
    inst.coeffs.push_back(c);
  }
  const std::size_t m = std::size_t(1) << r;
  while (true) {
    std::vector<double> g(m);
    for (auto& v : g) v = rng.uniform(1e-6, 1.0 - 1e-6);
    std::sort(g.begin(), g.end());
    bool ok = true;
    for (std::size_t j = 1; j < m; ++j)
      if (g[j] - g[j - 1] < 1e-5) ok = false;
    if (ok) {
      inst.grid = std::move(g);
      break;
    }
  }
  return inst;
}

}  // namespace lowmult
