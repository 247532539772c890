#ifndef LOWMULT_RNG_HPP
#define LOWMULT_RNG_HPP

#include <cstdint>
#include <random>

namespace lowmult {

// Seeded mt19937_64 with hand-rolled uniform draws.  std distributions are
// not pinned across standard libraries; these are, for a given build and for
// the standardized engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed), seed_mix_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= lim);
    return x % n;
  }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // derive an independent stream (for per-trial parallel randomness)
  Rng fork(std::uint64_t stream) const {
    std::uint64_t x = seed_mix_ ^ (0x9e3779b97f4a7c15ull * (stream + 1));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return Rng(x);
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_mix_ = 0;
};

}  // namespace lowmult

#endif
