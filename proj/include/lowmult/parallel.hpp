#ifndef LOWMULT_PARALLEL_HPP
#define LOWMULT_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lowmult {

// Runs fn(i) for i in [0, n) on up to `workers` threads.  Results must be
// written to index-addressed slots by the caller so reductions stay
// deterministic regardless of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline unsigned hardware_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n ? n : 1;
}

}  // namespace lowmult

#endif
