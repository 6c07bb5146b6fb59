#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace peakcap {

// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware
// default). Each index is independent; results must be written to
// preallocated per-index slots so the outcome cannot depend on the number
// of workers or on scheduling.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t t = threads > 0 ? static_cast<std::size_t>(threads) : (hw ? hw : 1);
  if (t > n) t = n ? n : 1;
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t chunk = (n + t - 1) / t;
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace peakcap
