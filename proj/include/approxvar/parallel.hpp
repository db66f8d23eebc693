#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace approxvar {

/// Runs fn(0..n-1), chunked over `jobs` threads when jobs > 1. Callers write
/// to disjoint output slots, so the result is identical to the sequential
/// order.
inline void parallel_for(std::size_t n, unsigned jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned workers = std::min<std::size_t>(jobs, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace approxvar
