#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace perctree {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. fn must be safe to
/// call concurrently for distinct indices.
template <typename Fn>
void parallel_for(int jobs, std::size_t count, Fn&& fn) {
  if (count == 0) return;
  jobs = static_cast<int>(std::min<std::size_t>(std::max(jobs, 1), count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace perctree
