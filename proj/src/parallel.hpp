#ifndef CTSEG_SRC_PARALLEL_HPP
#define CTSEG_SRC_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace ctseg::detail {

// Runs fn(i) for i in [0, n) across up to `threads` workers with a static
// partition. Results must be written into preallocated slots so the outcome
// is identical for any thread count. The first worker exception is rethrown.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (n <= 0) return;
  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const int lo = t * chunk;
      const int hi = std::min(n, lo + chunk);
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ctseg::detail

#endif
