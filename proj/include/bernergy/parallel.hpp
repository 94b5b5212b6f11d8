#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace bernergy {

// Worker count: hardware concurrency, capped by BERNERGY_THREADS when set.
inline std::size_t thread_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BERNERGY_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (...) {
      // ignore malformed values
    }
  }
  return n;
}

// Runs f(i) for i in [0, n). Each index is handled by exactly one worker, so
// callers that write only to slot i get results independent of thread count.
template <typename F>
void parallel_for(std::size_t n, F&& f, std::size_t min_per_thread = 16) {
  const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_per_thread)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bernergy
