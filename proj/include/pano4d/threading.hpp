#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace pano4d {

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 4 : static_cast<int>(n);
}

// Runs fn(i) for i in [0, count). Work is split into fixed-size chunks that
// are claimed by a shared counter; each index writes only its own outputs, so
// results do not depend on the number of worker threads. Reductions must be
// done by the caller over per-index (or per-chunk) buffers in index order.
inline void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn,
                         int grain = 0) {
  if (count <= 0) return;
  int threads = hardware_threads();
  if (count < 64 || threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (grain <= 0) grain = static_cast<int>(std::max<std::int64_t>(1, count / (threads * 8)));
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::int64_t begin = next.fetch_add(grain);
      if (begin >= count) return;
      std::int64_t end = std::min<std::int64_t>(begin + grain, count);
      for (std::int64_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace pano4d
