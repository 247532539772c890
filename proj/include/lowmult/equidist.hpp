#ifndef LOWMULT_EQUIDIST_HPP
#define LOWMULT_EQUIDIST_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "lowmult/bigint.hpp"
#include "lowmult/fixed_point.hpp"
#include "lowmult/primes.hpp"

namespace lowmult {

inline constexpr unsigned kOrbitBits = 256;

// frac(n * log2/log p_j) for n = 1..N, held at 256 fractional bits
struct OrbitSample {
  PrimeSet primes;
  std::size_t N = 0;
  std::vector<std::array<std::uint64_t, 4>> mants;  // row-major [n-1][j], little-endian limbs
  std::uint64_t err_ulps = 0;                       // uniform certified radius

  double value(std::size_t n, std::size_t j) const;     // n is 1-based
  BigInt mantissa(std::size_t n, std::size_t j) const;  // value = mant * 2^-256
};

OrbitSample orbit(const PrimeSet& primes, std::size_t N);

// |(1/N) sum_n e(k . v_n)|, k a nonzero integer vector
double weyl_sum(const OrbitSample& sample, const std::vector<std::int64_t>& k);

struct BoxReport {
  std::uint64_t P = 0;
  std::size_t k_rel = 0;      // assumed relation count (0 for honest primes)
  std::size_t boxes_hit = 0;
  std::uint64_t max_count = 0;
  double max_occupancy = 0.0;  // max_count / N
  double bound_ratio = 0.0;    // max_occupancy * P^(r - k_rel)
};

BoxReport box_occupancy(const OrbitSample& sample, std::uint64_t P, std::size_t k_rel = 0);

struct RelationHit {
  std::vector<std::int64_t> coeffs;  // n_1,...,n_r, n_{r+1}
  double residual = 0.0;
};

// exhaustive bounded-height search for |sum n_j log2/logp_j - n_{r+1}| < tol;
// all hits certified at 256 bits, sorted by residual
std::vector<RelationHit> relation_search(const PrimeSet& primes, std::int64_t height, double tol);

// reduced rational relation system: for j = 1..k,
//   theta_{perm[r-j]} = sum_h b[j-1][h] * theta_{perm[h]} + b[j-1][r-k]
struct RelationSystem {
  std::size_t r = 0;
  std::size_t k = 0;
  std::vector<std::size_t> perm;           // new position -> original coordinate
  std::vector<std::vector<BigRat>> b;      // k rows, (r-k)+1 columns, last = constant
  std::vector<BigInt> denoms;              // n_j >= 1 per row
  std::vector<std::vector<BigInt>> nums;   // m_{j,h} = b * n_j, integer, incl. constant
};

// rows are (a_1..a_r | a_{r+1}) meaning sum a_h theta_h = a_{r+1}
RelationSystem reduce_relations(const std::vector<std::vector<BigRat>>& rows, std::size_t r);

struct CoordCurve {
  std::uint64_t prime = 0;
  BigRat rate;                              // exponent rate in the curve parameter
  std::int64_t dilate_lo = 0, dilate_hi = 0;  // needed integer dilate exponents
  bool dependent = false;

  std::int64_t dilate_count() const { return dilate_hi - dilate_lo + 1; }
};

struct CurveFamily {
  bool box_only = false;  // k = 0: the full product box, no dilates
  std::uint64_t L = 1;
  std::vector<BigRat> rho;          // one per dependent coordinate, all nonzero
  std::vector<CoordCurve> coords;   // permuted coordinate order
  BigInt shift_bound;               // |S| bound (3 n_2^2 in the 2-prime case)
  BigInt L_bound;                   // 2 lcm(n_j) max|m|
  BigInt I_bound;                   // r L^r max|m|
};

CurveFamily make_curves(const RelationSystem& system, const PrimeSet& primes);

struct CoverReport {
  std::size_t N = 0;
  std::size_t misses = 0;
  std::vector<std::size_t> miss_samples;  // up to 16 missing n
};

// checks, for each n <= N, that the orbit of `thetas` lies within tol of the
// curve family induced by `system`; thetas are exact rationals indexed by
// original coordinate
CoverReport verify_curve_cover(const RelationSystem& system, const std::vector<BigRat>& thetas,
                               std::size_t N, const BigRat& tol);

// synthetic "logarithms" satisfying the system exactly
std::vector<BigRat> synth_thetas(const RelationSystem& system, std::uint64_t seed);

}  // namespace lowmult

#endif
