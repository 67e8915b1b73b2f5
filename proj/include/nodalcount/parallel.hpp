// Deterministic fan-out over an index range.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nodalcount {

/// Evaluates fn(i) for i in [0, count) on `workers` threads and returns the
/// results in index order. Work is handed out dynamically, but each slot is
/// written only by the task for its index, so the output never depends on
/// scheduling. The first exception thrown by any task is rethrown.
template <typename Fn>
auto parallel_map(std::size_t count, int workers, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  const auto threads = static_cast<std::size_t>(std::clamp<long>(workers, 1, static_cast<long>(std::max<std::size_t>(count, 1))));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace nodalcount
