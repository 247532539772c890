#ifndef LOWMULT_DIGIT_SEARCH_HPP
#define LOWMULT_DIGIT_SEARCH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lowmult/bigint.hpp"
#include "lowmult/primes.hpp"

namespace lowmult {

struct DigitConstraintProblem {
  PrimeSet primes;
  std::vector<std::uint64_t> caps;  // cap_j = max allowed digit in base p_j
  BigInt limit = 0;
  std::optional<double> relax_epsilon;  // allow ceil(eps * digit_count_j) violations per prime

  static std::vector<std::uint64_t> half_caps(const PrimeSet& ps);   // (p-1)/2, the no-carry bound
  static std::vector<std::uint64_t> third_caps(const PrimeSet& ps);  // floor(p/3)
  static DigitConstraintProblem make(PrimeSet ps, BigInt limit,
                                     std::vector<std::uint64_t> caps = {},
                                     std::optional<double> relax = std::nullopt);
  void validate() const;
  std::uint64_t fingerprint() const;
};

// Serialized DFS position of one (digit-length, top-digit) subtree of the
// base-p_min enumeration tree.
struct SubtreeFrontier {
  std::uint64_t task_index = 0;
  std::uint32_t digit_len = 0;  // D
  std::uint32_t top_digit = 0;  // d1
  std::uint32_t depth = 0;      // k: digits[0..k-1] pushed; 0 = untouched task
  std::vector<std::uint32_t> digits;
  std::vector<std::uint32_t> next_digit;  // size depth + 1 when depth > 0
};

struct SearchCheckpoint {
  std::uint64_t fingerprint = 0;
  std::uint64_t node_count = 0;
  std::uint64_t next_task = 0;
  std::vector<SubtreeFrontier> active;
  std::vector<BigInt> found;
};

void checkpoint_save(const SearchCheckpoint& cp, std::ostream& out);
SearchCheckpoint checkpoint_load(std::istream& in);  // throws on truncation/corruption

struct SearchOutcome {
  std::vector<BigInt> found;  // sorted ascending when completed
  std::uint64_t nodes = 0;
  bool completed = true;
  std::optional<SearchCheckpoint> frontier;  // present when interrupted
};

// Prefix-pruned enumeration over base-p_min digit strings, other bases
// tracked incrementally.  node_budget 0 means unlimited.
SearchOutcome run_search(const DigitConstraintProblem& problem, unsigned workers = 1,
                         std::uint64_t node_budget = 0,
                         const SearchCheckpoint* resume = nullptr);

// Per-n digit check over [1, limit]; the simple dual route.  Requires the
// limit to fit in 64 bits.
std::vector<BigInt> enumerate_qualifying(const DigitConstraintProblem& problem,
                                         std::uint64_t* nodes_out = nullptr);

std::vector<BigInt> enumerate_prefix_pruned(const DigitConstraintProblem& problem,
                                            unsigned workers = 1,
                                            std::uint64_t* nodes_out = nullptr);

struct CensusRow {
  BigInt bound;
  std::uint64_t count = 0;  // qualifying n <= bound
  double predicted = 0.0;   // heuristic limit^(1-sigma) at this bound
};

// Cumulative counts at bounds 2^step, 2^(2*step), ..., then the limit itself.
std::vector<CensusRow> census(const DigitConstraintProblem& problem, unsigned bucket_exponent = 1);

}  // namespace lowmult

#endif
