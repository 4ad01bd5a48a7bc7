#ifndef MWALL_PARALLEL_HPP
#define MWALL_PARALLEL_HPP

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace mwall {

// Worker count: MW_THREADS caps (or pins) the pool; default is the hardware
// concurrency. Results are always merged in index order, so the thread count
// never affects output bytes.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("MW_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  return hw;
}

// Run fn(i) for i in [0, n), chunked over the worker pool. fn must only write
// to index-i slots of pre-sized outputs (no shared mutable state).
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mwall

#endif  // MWALL_PARALLEL_HPP
