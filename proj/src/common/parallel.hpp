#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace corpusdedup::detail {

inline unsigned worker_count(unsigned requested) noexcept {
  return requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
}

/// Calls f(i) for i in [0, n) over contiguous chunks, one per worker.
/// Exceptions propagate from the first failing chunk.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  const std::size_t workers = std::min<std::size_t>(worker_count(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t per = (n + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t lo = 0; lo < n; lo += per) {
    jobs.push_back(std::async(std::launch::async, [&f, lo, hi = std::min(n, lo + per)] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    }));
  }
  for (auto& j : jobs) j.get();
}

}  // namespace corpusdedup::detail
