#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace setdepth {

/// Worker count used when a caller passes threads <= 0: the SETDEPTH_THREADS
/// environment variable if set, otherwise the hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("SETDEPTH_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline int resolve_threads(int threads) {
  return threads <= 0 ? default_thread_count() : threads;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers with a static
/// block partition. Callers must write results into disjoint slots; with
/// that discipline the output is identical for any thread count.
inline void parallel_for(std::int64_t n, int threads,
                         const std::function<void(std::int64_t)>& fn) {
  threads = resolve_threads(threads);
  if (n <= 0) return;
  if (threads == 1 || n == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (static_cast<std::int64_t>(threads) > n) threads = static_cast<int>(n);

  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(threads) - 1);
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run_block = [&](std::int64_t begin, std::int64_t end) {
    try {
      for (std::int64_t i = begin; i < end; ++i) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  const std::int64_t chunk = (n + threads - 1) / threads;
  for (int t = 1; t < threads; ++t) {
    std::int64_t begin = t * chunk;
    std::int64_t end = std::min<std::int64_t>(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(run_block, begin, end);
  }
  run_block(0, std::min<std::int64_t>(n, chunk));
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace setdepth
