#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace heatk::detail {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Indices are handed
// out in blocks so neighbouring tasks tend to share a thread. The first
// exception thrown by fn is rethrown after all threads finish.
template <class F>
void parallel_for(std::size_t n, int workers, F&& fn, std::size_t block = 8) {
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), (n + block - 1) / block);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    try {
      for (;;) {
        const std::size_t lo = next.fetch_add(block);
        if (lo >= n) return;
        const std::size_t hi = std::min(n, lo + block);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(n);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace heatk::detail
