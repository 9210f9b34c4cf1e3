#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace collonet {

/// Worker count: COLLONET_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency().
std::size_t thread_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks across
/// thread_count() workers. Each index is visited exactly once, so writing
/// per-index results and reducing them afterwards in index order gives
/// the same answer for any thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_per_thread = 128) {
  const std::size_t workers =
      std::min(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_per_thread)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (std::size_t i = 0; i < std::min(n, chunk); ++i) body(i);
}

}  // namespace collonet
