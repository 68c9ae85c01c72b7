#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace xrank {

/// Number of workers for `jobs` (0 = hardware concurrency).
inline std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs != 0) return jobs;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(begin, end) over [0, count) in blocks of `block` items on up to `jobs` threads.
/// The first exception thrown by any block is rethrown on the caller's thread.
template <typename Fn>
void parallel_blocks(std::size_t count, std::size_t block, std::size_t jobs, Fn&& fn) {
  if (count == 0) return;
  block = std::max<std::size_t>(1, block);
  const std::size_t blocks = (count + block - 1) / block;
  const std::size_t workers = std::min(resolve_jobs(jobs), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b * block, std::min(count, (b + 1) * block));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t b = next++; b < blocks; b = next++) {
        try {
          fn(b * block, std::min(count, (b + 1) * block));
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = blocks;
        }
      }
    });
  }
  threads.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace xrank
