#include "lowmult/digit_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "lowmult/digits.hpp"
#include "lowmult/heuristics.hpp"
#include "lowmult/parallel.hpp"

namespace lowmult {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t viol_budget(double eps, std::size_t digit_count) {
  return static_cast<std::uint64_t>(std::ceil(eps * static_cast<double>(digit_count)));
}

}  // namespace

std::vector<std::uint64_t> DigitConstraintProblem::half_caps(const PrimeSet& ps) {
  std::vector<std::uint64_t> caps;
  for (std::uint64_t p : ps.primes) caps.push_back((p - 1) / 2);
  return caps;
}

std::vector<std::uint64_t> DigitConstraintProblem::third_caps(const PrimeSet& ps) {
  std::vector<std::uint64_t> caps;
  for (std::uint64_t p : ps.primes) caps.push_back(p / 3);
  return caps;
}

DigitConstraintProblem DigitConstraintProblem::make(PrimeSet ps, BigInt limit,
                                                    std::vector<std::uint64_t> caps,
                                                    std::optional<double> relax) {
  DigitConstraintProblem pr;
  if (caps.empty()) caps = half_caps(ps);
  pr.primes = std::move(ps);
  pr.caps = std::move(caps);
  pr.limit = std::move(limit);
  pr.relax_epsilon = relax;
  pr.validate();
  return pr;
}

void DigitConstraintProblem::validate() const {
  if (caps.size() != primes.r())
    throw std::invalid_argument("digit search: caps/primes length mismatch");
  for (std::size_t j = 0; j < caps.size(); ++j)
    if (caps[j] >= primes.primes[j])
      throw std::invalid_argument("digit search: cap must satisfy 0 <= cap < p");
  if (limit < 1) throw std::invalid_argument("digit search: limit must be >= 1");
  if (relax_epsilon) {
    const double e = *relax_epsilon;
    if (!(e > 0.0 && e < 1.0))
      throw std::invalid_argument("digit search: relax epsilon must lie in (0,1)");
  }
}

std::uint64_t DigitConstraintProblem::fingerprint() const {
  std::string s = "p=" + primes.to_string() + ";caps=";
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(caps[i]);
  }
  s += ";limit=" + limit.str() + ";eps=";
  if (relax_epsilon) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *relax_epsilon);
    s += buf;
  } else {
    s += "none";
  }
  return fnv1a(s);
}

// ---------------------------------------------------------------------------
// per-n scan

namespace {

bool qualifies_u64(std::uint64_t n, const DigitConstraintProblem& pr) {
  for (std::size_t j = 0; j < pr.primes.r(); ++j) {
    const std::uint64_t p = pr.primes.primes[j];
    const std::uint64_t cap = pr.caps[j];
    std::uint64_t v = n, viol = 0, dc = 0;
    if (!pr.relax_epsilon) {
      while (v) {
        if (v % p > cap) return false;
        v /= p;
      }
    } else {
      while (v) {
        if (v % p > cap) ++viol;
        v /= p;
        ++dc;
      }
      if (viol > viol_budget(*pr.relax_epsilon, dc)) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<BigInt> enumerate_qualifying(const DigitConstraintProblem& problem,
                                         std::uint64_t* nodes_out) {
  problem.validate();
  if (bit_length(problem.limit) > 64)
    throw std::invalid_argument("enumerate_qualifying: limit above 2^64; use the prefix-pruned mode");
  const std::uint64_t lim = problem.limit.convert_to<std::uint64_t>();
  std::vector<BigInt> out;
  for (std::uint64_t n = 1; n <= lim && n != 0; ++n)
    if (qualifies_u64(n, problem)) out.emplace_back(n);
  if (nodes_out) *nodes_out = lim;
  return out;
}

// ---------------------------------------------------------------------------
// prefix-pruned enumerator

namespace {

// Incrementally tracked base-p digit expansion of the candidate value.
struct Tracked {
  std::uint64_t p = 0;
  std::uint64_t cap = 0;
  std::vector<std::uint32_t> dig;
  std::uint64_t viol = 0;
  std::int64_t top = -1;  // highest nonzero index

  void add_scaled(const std::vector<std::uint32_t>& unit, std::uint64_t d) {
    if (d == 0) return;
    std::uint64_t carry = 0;
    std::size_t i = 0;
    for (; i < unit.size() || carry; ++i) {
      std::uint64_t cur = dig[i] + carry;
      if (i < unit.size()) cur += d * unit[i];
      const std::uint64_t nd = cur % p;
      carry = cur / p;
      if ((dig[i] > cap) != (nd > cap)) viol += (nd > cap) ? 1 : -1;
      dig[i] = static_cast<std::uint32_t>(nd);
      if (nd != 0 && static_cast<std::int64_t>(i) > top) top = static_cast<std::int64_t>(i);
    }
  }
};

struct TrackState {
  BigInt val;
  std::vector<Tracked> tr;
};

struct TaskSpec {
  std::uint32_t digit_len = 0;
  std::uint32_t top_digit = 0;
};

struct EnumContext {
  const DigitConstraintProblem* pr = nullptr;
  std::uint64_t p1 = 0;          // enumeration base: smallest prime
  std::size_t p1_index = 0;      // its index in the problem prime list
  std::uint64_t cap1 = 0;
  std::uint32_t max_len = 0;     // digit capacity of limit in base p1
  std::vector<BigInt> p1pow;
  // unit digit vectors: p1^pos expanded in each tracked base
  std::vector<std::vector<std::vector<std::uint32_t>>> unit;  // [tracked][pos]
  std::vector<std::size_t> tracked_index;                     // tracked -> prime index
  std::vector<TaskSpec> tasks;
};

EnumContext make_context(const DigitConstraintProblem& pr) {
  EnumContext cx;
  cx.pr = &pr;
  cx.p1 = pr.primes.smallest();
  cx.p1_index = static_cast<std::size_t>(
      std::find(pr.primes.primes.begin(), pr.primes.primes.end(), cx.p1) - pr.primes.primes.begin());
  cx.cap1 = pr.caps[cx.p1_index];
  cx.max_len = static_cast<std::uint32_t>(digit_count(pr.limit, cx.p1));
  cx.p1pow.resize(cx.max_len + 1);
  cx.p1pow[0] = 1;
  for (std::uint32_t i = 1; i <= cx.max_len; ++i) cx.p1pow[i] = cx.p1pow[i - 1] * cx.p1;
  for (std::size_t j = 0; j < pr.primes.r(); ++j) {
    if (j == cx.p1_index) continue;
    cx.tracked_index.push_back(j);
    std::vector<std::vector<std::uint32_t>> units;
    for (std::uint32_t pos = 0; pos < cx.max_len; ++pos) {
      const DigitVector dv = to_digits(cx.p1pow[pos], pr.primes.primes[j]);
      std::vector<std::uint32_t> u(dv.digits.begin(), dv.digits.end());
      units.push_back(std::move(u));
    }
    cx.unit.push_back(std::move(units));
  }
  // task list: lengths ascending, top digit ascending -> subtree value ranges ascend
  for (std::uint32_t D = 1; D <= cx.max_len; ++D) {
    std::uint64_t hi = cx.p1 - 1;
    if (!pr.relax_epsilon) hi = cx.cap1;
    else if (viol_budget(*pr.relax_epsilon, D) == 0) hi = cx.cap1;
    for (std::uint64_t d1 = 1; d1 <= hi; ++d1) {
      if (d1 * cx.p1pow[D - 1] > pr.limit) break;
      cx.tasks.push_back({D, static_cast<std::uint32_t>(d1)});
    }
  }
  return cx;
}

// One subtree DFS with serializable state.
class SubtreeRun {
 public:
  SubtreeRun(const EnumContext& cx, const SubtreeFrontier& start)
      : cx_(cx), D_(start.digit_len), d1_(start.top_digit), task_index_(start.task_index) {
    const auto& pr = *cx_.pr;
    state_.val = 0;
    for (std::size_t t = 0; t < cx_.tracked_index.size(); ++t) {
      Tracked tr;
      const std::size_t j = cx_.tracked_index[t];
      tr.p = pr.primes.primes[j];
      tr.cap = pr.caps[j];
      tr.dig.assign(digit_count(pr.limit, tr.p) + 4, 0);
      state_.tr.push_back(std::move(tr));
    }
    budget1_ = pr.relax_epsilon ? viol_budget(*pr.relax_epsilon, D_) : 0;
    snapshots_.resize(D_ + 1);
    viol1_snap_.assign(D_ + 1, 0);
    digits_.assign(D_, 0);
    nxt_.assign(D_ + 1, 0);
    if (start.depth == 0) {
      k_ = 0;
      nxt_[0] = d1_;
    } else {
      // rebuild the saved spine without recounting nodes
      k_ = 0;
      nxt_[0] = d1_;
      for (std::uint32_t lvl = 0; lvl < start.depth; ++lvl) {
        push(lvl, start.digits[lvl]);
        k_ = lvl + 1;
      }
      for (std::uint32_t lvl = 0; lvl < start.depth; ++lvl) digits_[lvl] = start.digits[lvl];
      for (std::uint32_t lvl = 0; lvl <= start.depth; ++lvl) nxt_[lvl] = start.next_digit[lvl];
    }
  }

  // returns true when the subtree completed, false when the budget interrupted it
  template <typename Emit, typename NodeTick>
  bool run(Emit&& emit, NodeTick&& tick) {
    const auto& pr = *cx_.pr;
    while (true) {
      const std::uint32_t lvl = k_;
      const std::uint64_t hi = level_hi(lvl);
      const std::uint64_t d = nxt_[lvl];
      if (d > hi) {
        if (lvl == 0) return true;  // subtree exhausted
        k_ = lvl - 1;
        restore(k_);  // undo the push that opened this level
        continue;
      }
      const std::uint32_t pos = D_ - 1 - lvl;
      if (state_.val + BigInt(d) * cx_.p1pow[pos] > pr.limit) {
        nxt_[lvl] = hi + 1;  // larger siblings only grow the value
        continue;
      }
      push(lvl, static_cast<std::uint32_t>(d));
      digits_[lvl] = static_cast<std::uint32_t>(d);
      nxt_[lvl] = d + 1;
      if (lvl == D_ - 1) {
        if (leaf_qualifies()) emit(state_.val);
        restore(lvl);  // leaf does not stay pushed
      } else {
        k_ = lvl + 1;
        nxt_[k_] = 0;
      }
      if (!tick()) return false;  // budget exhausted: state is serializable as-is
    }
  }

  SubtreeFrontier frontier() const {
    SubtreeFrontier f;
    f.task_index = task_index_;
    f.digit_len = D_;
    f.top_digit = d1_;
    f.depth = k_;
    f.digits.assign(digits_.begin(), digits_.begin() + k_);
    f.next_digit.assign(nxt_.begin(), nxt_.begin() + k_ + 1);
    return f;
  }

 private:
  std::uint64_t level_hi(std::uint32_t lvl) const {
    if (lvl == 0) return d1_;
    if (!cx_.pr->relax_epsilon) return cx_.cap1;
    return (viol1_ < budget1_) ? cx_.p1 - 1 : cx_.cap1;
  }

  void push(std::uint32_t lvl, std::uint32_t d) {
    snapshots_[lvl] = state_;
    viol1_snap_[lvl] = viol1_;
    const std::uint32_t pos = D_ - 1 - lvl;
    state_.val += BigInt(d) * cx_.p1pow[pos];
    for (std::size_t t = 0; t < state_.tr.size(); ++t)
      state_.tr[t].add_scaled(cx_.unit[t][pos], d);
    if (d > cx_.cap1) ++viol1_;
  }

  void restore(std::uint32_t lvl) {
    state_ = snapshots_[lvl];
    viol1_ = viol1_snap_[lvl];
  }

  bool leaf_qualifies() const {
    const auto& pr = *cx_.pr;
    if (!pr.relax_epsilon) {
      if (viol1_ != 0) return false;
      for (const Tracked& tr : state_.tr)
        if (tr.viol != 0) return false;
      return true;
    }
    if (viol1_ > viol_budget(*pr.relax_epsilon, D_)) return false;
    for (const Tracked& tr : state_.tr) {
      const std::size_t dc = static_cast<std::size_t>(tr.top + 1);
      if (tr.viol > viol_budget(*pr.relax_epsilon, dc)) return false;
    }
    return true;
  }

  const EnumContext& cx_;
  std::uint32_t D_;
  std::uint32_t d1_;
  std::uint64_t task_index_;
  std::uint64_t budget1_ = 0;
  std::uint64_t viol1_ = 0;
  std::uint32_t k_ = 0;
  TrackState state_;
  std::vector<TrackState> snapshots_;
  std::vector<std::uint64_t> viol1_snap_;
  std::vector<std::uint32_t> digits_;
  std::vector<std::uint64_t> nxt_;
};

}  // namespace

SearchOutcome run_search(const DigitConstraintProblem& problem, unsigned workers,
                         std::uint64_t node_budget, const SearchCheckpoint* resume) {
  problem.validate();
  if (resume && resume->fingerprint != problem.fingerprint())
    throw std::invalid_argument("checkpoint fingerprint does not match this problem");
  const EnumContext cx = make_context(problem);

  std::atomic<std::uint64_t> nodes{resume ? resume->node_count : 0};
  const bool budgeted = node_budget != 0;

  // work items: saved frontiers first, then fresh tasks from next_task on
  std::vector<SubtreeFrontier> pending;
  std::uint64_t first_fresh = 0;
  if (resume) {
    pending = resume->active;
    first_fresh = resume->next_task;
  }
  const std::uint64_t n_fresh = cx.tasks.size() > first_fresh ? cx.tasks.size() - first_fresh : 0;
  const std::size_t n_items = pending.size() + static_cast<std::size_t>(n_fresh);

  std::vector<std::vector<BigInt>> found_slots(n_items);
  std::vector<std::optional<SubtreeFrontier>> interrupted(n_items);

  auto item_frontier = [&](std::size_t i) -> SubtreeFrontier {
    if (i < pending.size()) return pending[i];
    const std::uint64_t ti = first_fresh + (i - pending.size());
    SubtreeFrontier f;
    f.task_index = ti;
    f.digit_len = cx.tasks[ti].digit_len;
    f.top_digit = cx.tasks[ti].top_digit;
    f.depth = 0;
    return f;
  };

  parallel_for(n_items, workers, [&](std::size_t i) {
    const SubtreeFrontier start = item_frontier(i);
    if (budgeted && nodes.load(std::memory_order_relaxed) >= node_budget) {
      interrupted[i] = start;  // untouched
      return;
    }
    SubtreeRun run(cx, start);
    const bool done = run.run(
        [&](const BigInt& v) { found_slots[i].push_back(v); },
        [&]() {
          const std::uint64_t n = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
          return !budgeted || n < node_budget;
        });
    if (!done) interrupted[i] = run.frontier();
  });

  SearchOutcome out;
  out.nodes = nodes.load();
  if (resume)
    out.found = resume->found;
  for (auto& slot : found_slots)
    for (auto& v : slot) out.found.push_back(std::move(v));

  std::vector<SubtreeFrontier> still_active;
  for (auto& f : interrupted)
    if (f) still_active.push_back(std::move(*f));

  if (still_active.empty()) {
    out.completed = true;
    std::sort(out.found.begin(), out.found.end());
  } else {
    out.completed = false;
    SearchCheckpoint cp;
    cp.fingerprint = problem.fingerprint();
    cp.node_count = out.nodes;
    // untouched fresh tasks are re-described by their frontiers, so every
    // fresh task is accounted for either in `active` or as completed
    cp.next_task = cx.tasks.size();
    cp.active = std::move(still_active);
    cp.found = out.found;
    out.frontier = std::move(cp);
  }
  return out;
}

std::vector<BigInt> enumerate_prefix_pruned(const DigitConstraintProblem& problem,
                                            unsigned workers, std::uint64_t* nodes_out) {
  SearchOutcome o = run_search(problem, workers, 0, nullptr);
  if (nodes_out) *nodes_out = o.nodes;
  return std::move(o.found);
}

std::vector<CensusRow> census(const DigitConstraintProblem& problem, unsigned bucket_exponent) {
  problem.validate();
  if (bucket_exponent == 0) throw std::invalid_argument("census: bucket exponent must be >= 1");
  const std::vector<BigInt> all = enumerate_prefix_pruned(problem);
  std::vector<CensusRow> rows;
  for (BigInt bound = BigInt(1) << bucket_exponent; bound < problem.limit;
       bound <<= bucket_exponent) {
    CensusRow row;
    row.bound = bound;
    row.count = static_cast<std::uint64_t>(
        std::upper_bound(all.begin(), all.end(), bound) - all.begin());
    row.predicted = predicted_count(problem.primes, bound);
    rows.push_back(std::move(row));
  }
  CensusRow last;
  last.bound = problem.limit;
  last.count = all.size();
  last.predicted = predicted_count(problem.primes, problem.limit);
  rows.push_back(std::move(last));
  return rows;
}

// ---------------------------------------------------------------------------
// checkpoint serialization: fixed-width little-endian, length-prefixed

namespace {

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void put_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  put_bytes(out, buf, sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint stream truncated");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

constexpr char kMagic[4] = {'L', 'M', 'C', '1'};

}  // namespace

void checkpoint_save(const SearchCheckpoint& cp, std::ostream& out) {
  put_bytes(out, kMagic, 4);
  put_le<std::uint64_t>(out, cp.fingerprint);
  put_le<std::uint64_t>(out, cp.node_count);
  put_le<std::uint64_t>(out, cp.next_task);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cp.active.size()));
  for (const SubtreeFrontier& f : cp.active) {
    put_le<std::uint64_t>(out, f.task_index);
    put_le<std::uint32_t>(out, f.digit_len);
    put_le<std::uint32_t>(out, f.top_digit);
    put_le<std::uint32_t>(out, f.depth);
    for (std::uint32_t d : f.digits) put_le<std::uint32_t>(out, d);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.next_digit.size()));
    for (std::uint32_t d : f.next_digit) put_le<std::uint32_t>(out, d);
  }
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(cp.found.size()));
  for (const BigInt& v : cp.found) {
    std::vector<unsigned char> bytes;
    boost::multiprecision::export_bits(v, std::back_inserter(bytes), 8, /*msv_first=*/false);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(bytes.size()));
    if (!bytes.empty()) put_bytes(out, bytes.data(), bytes.size());
  }
  out.flush();
  if (!out) throw std::runtime_error("checkpoint write failed");
}

SearchCheckpoint checkpoint_load(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("checkpoint corrupt: bad magic");
  SearchCheckpoint cp;
  cp.fingerprint = get_le<std::uint64_t>(in);
  cp.node_count = get_le<std::uint64_t>(in);
  cp.next_task = get_le<std::uint64_t>(in);
  const std::uint32_t n_active = get_le<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_active; ++i) {
    SubtreeFrontier f;
    f.task_index = get_le<std::uint64_t>(in);
    f.digit_len = get_le<std::uint32_t>(in);
    f.top_digit = get_le<std::uint32_t>(in);
    f.depth = get_le<std::uint32_t>(in);
    if (f.depth > f.digit_len) throw std::runtime_error("checkpoint corrupt: depth > digit_len");
    for (std::uint32_t d = 0; d < f.depth; ++d) f.digits.push_back(get_le<std::uint32_t>(in));
    const std::uint32_t nn = get_le<std::uint32_t>(in);
    if (nn > f.digit_len + 1) throw std::runtime_error("checkpoint corrupt: next_digit length");
    for (std::uint32_t d = 0; d < nn; ++d) f.next_digit.push_back(get_le<std::uint32_t>(in));
    cp.active.push_back(std::move(f));
  }
  const std::uint64_t n_found = get_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < n_found; ++i) {
    const std::uint32_t nb = get_le<std::uint32_t>(in);
    std::vector<unsigned char> bytes(nb);
    if (nb) {
      in.read(reinterpret_cast<char*>(bytes.data()), nb);
      if (!in) throw std::runtime_error("checkpoint stream truncated");
    }
    BigInt v = 0;
    if (nb) boost::multiprecision::import_bits(v, bytes.begin(), bytes.end(), 8, /*msv_first=*/false);
    cp.found.push_back(std::move(v));
  }
  return cp;
}

}  // namespace lowmult
