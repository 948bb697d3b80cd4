#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace qmaforge {

// Worker count: QMA_FORGE_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
int worker_count();

// Evaluates f(0), ..., f(n - 1) on up to worker_count() threads. Results come
// back in index order, so the output never depends on scheduling. The first
// exception thrown by any task is rethrown.
template <typename F>
auto parallel_map(std::size_t n, F f) -> std::vector<std::invoke_result_t<F, std::size_t>> {
  using Result = std::invoke_result_t<F, std::size_t>;
  std::vector<Result> out(n);
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace qmaforge
