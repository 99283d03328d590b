#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace adamant {

// Worker count from ADAMANT_THREADS (0 or unset = hardware concurrency).
std::size_t configured_threads();

/// Runs body(begin, end) over contiguous chunks of [0, count) on up to
/// `threads` workers. Each index is visited exactly once, so results written
/// by index do not depend on the worker count. The first exception thrown by
/// any chunk is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  if (count == 0) return;
  if (threads <= 1 || count == 1) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t workers = threads < count ? threads : count;
  const std::size_t chunk = (count + workers - 1) / workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = begin + chunk < count ? begin + chunk : count;
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace adamant
