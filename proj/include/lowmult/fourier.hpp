#ifndef LOWMULT_FOURIER_HPP
#define LOWMULT_FOURIER_HPP

#include <cstdint>
#include <vector>

#include "lowmult/primes.hpp"
#include "lowmult/rng.hpp"

namespace lowmult {

// K_i(t) = zeta_i * theta_i^t on t in [0,1)
struct CurveSpec {
  std::vector<double> zeta, theta;

  static CurveSpec orbit_curve(const PrimeSet& ps);       // (p_i^(t-1))_i
  static CurveSpec alternating_curve(std::size_t r);      // theta_j = 2^-j, binomial signs
  void validate() const;
  std::size_t r() const { return zeta.size(); }
};

struct FourierInstance {
  std::uint64_t P = 0;
  std::size_t r = 0;
  unsigned H = 0;
  double epsilon = 0.0;          // P^eps = 10^H unless overridden
  bool out_of_regime = false;    // epsilon >= 1/(20 r^2)
  PrimeSet base_primes;          // primes behind the A_j; empty for custom sets
  CurveSpec curve;

  std::vector<std::vector<std::uint32_t>> A;  // sorted residues per coordinate
  std::vector<std::vector<std::uint32_t>> F;  // lattice points hit by the curve
  std::vector<double> F_t;                    // witness t per F point
  std::vector<std::vector<std::int64_t>> Q;   // large spectrum, signed representatives
  std::vector<std::vector<std::int64_t>> Qp;  // Q restricted to the small box
  std::vector<std::size_t> E;                 // exceptional points, as indices into F

  double q_threshold = 0.0;   // P^(r(1-3 eps))
  double qp_box = 0.0;        // P^(1-6 r eps)
  double e_norm_bound = 0.0;  // P^(-8 r^2 eps)
  std::uint64_t delta_range = 0;  // floor(P^(7 r eps)), capped at P-1
  bool delta_saturated = false;
  bool f_large_enough = false;  // |F| > P / log P
};

// A_j = { sum d_i ceil(P/p^i) : 0 <= d_i < p/10 } + {0..ceil(P/p^H)-1}, all
// expressions verified distinct mod P
std::vector<std::uint32_t> build_A(std::uint64_t p, std::uint64_t P, unsigned H);

FourierInstance build_instance(const PrimeSet& ps, std::uint64_t P, unsigned H,
                               CurveSpec curve = {}, double epsilon_override = 0.0,
                               std::vector<std::vector<std::uint32_t>> custom_A = {});

// the three fill stages, exposed for tests; build_instance runs them in order
void discretize_curve(FourierInstance& inst);
void spectrum(FourierInstance& inst);
void exceptional_set(FourierInstance& inst);

struct ConclusionReport {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::vector<std::uint64_t> least_n;  // per trial; 0 when no witness exists
  bool delta_saturated = false;
};

// random beta and random x (from F\E, or from E when sample_exceptional):
// search n <= min(P^(10 r^2 eps), P) and the delta box for a witness of the
// triple-sumset membership
ConclusionReport verify_conclusion(const FourierInstance& inst, std::size_t trials,
                                   std::uint64_t seed, bool sample_exceptional = false);

struct RemarkReport {
  std::size_t r = 0;
  std::uint64_t P = 0;
  double epsilon = 0.0;
  std::uint64_t interval_top = 0;  // A_i = [0, interval_top]
  std::uint64_t n_bound = 0;       // floor(P^(r(r-1) eps / 2))
  double t_max = 0.0;              // P^(-r eps)
  std::size_t samples = 0;         // t grid size
  std::size_t pairs_checked = 0;   // (t, n) pairs within bounds
  // dot form: n * sum x_i mod P lands in [0, 3 r interval_top]
  std::size_t dot_collisions = 0;
  // vector form: n * x_i mod P lands in 3A_i for every coordinate at once
  std::size_t vector_collisions = 0;
  std::uint64_t first_fail_n = 0;  // least n beyond n_bound with a vector collision
  double first_fail_t = 0.0;
};

RemarkReport counterexample_remark(std::size_t r, std::uint64_t P, double epsilon = 0.1,
                                   std::size_t t_samples = 512);

struct LemmaInstance {
  std::vector<double> coeffs;  // c_i, nonzero
  std::vector<double> bases;   // x_i > 0, distinct
  std::vector<double> grid;    // 2^r increasing points in (0,1)
};

struct LemmaResult {
  double max_abs = 0.0;   // max_j |H(v_j)|
  std::size_t argmax = 0;
  double delta = 0.0;     // min consecutive grid gap
  double constant = 0.0;  // c(x_1..x_r), materialized from the inductive proof
  double bound = 0.0;     // delta^(r-1) * constant * max|c_i|
  bool holds = false;
};

LemmaResult lemma_lower_bound(const LemmaInstance& inst);

LemmaInstance random_lemma_instance(Rng& rng, std::size_t r);

}  // namespace lowmult

#endif
