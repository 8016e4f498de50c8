#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace collision_code::detail {

/// Splits [begin, end) into `workers` contiguous chunks and runs fn(lo, hi) on
/// each, one thread per chunk. The first exception thrown by any chunk is
/// rethrown after all threads join.
template <typename Fn>
void parallel_ranges(std::uint64_t begin, std::uint64_t end, unsigned workers, Fn&& fn) {
  const std::uint64_t total = end > begin ? end - begin : 0;
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(total, 1)));
  if (workers == 1) {
    fn(begin, end);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::uint64_t chunk = total / workers, extra = total % workers;
    std::uint64_t lo = begin;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t hi = lo + chunk + (w < extra ? 1 : 0);
      threads.emplace_back([&, lo, hi] {
        try {
          fn(lo, hi);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
      lo = hi;
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace collision_code::detail
