#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace articugeo {

/// Worker count: hardware concurrency, capped by ARTICUGEO_THREADS when set.
inline int thread_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ARTICUGEO_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

/// Runs fn(row) for row in [0, rows). Each row goes to exactly one worker, so
/// writers that own their row produce schedule-independent results.
template <class Fn>
void parallel_rows(int rows, Fn&& fn) {
  const int workers = std::min(thread_count(), rows);
  if (workers <= 1 || rows < 32) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int r = w; r < rows; r += workers) fn(r);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace articugeo
