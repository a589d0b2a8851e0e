#pragma once

// Static block partition of [0, n) over worker threads.

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace gridcube {

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// body(begin, end, worker) runs once per nonempty block; worker < threads.
template <class Body>
void parallel_for(std::uint64_t n, unsigned threads, Body&& body) {
  if (threads == 0) threads = default_threads();
  const std::uint64_t min_block = 4096;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, n / min_block)));
  if (threads <= 1) {
    if (n) body(std::uint64_t{0}, n, 0u);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t b = n * w / threads, e = n * (w + 1) / threads;
    pool.emplace_back([&body, b, e, w] { body(b, e, w); });
  }
}

}  // namespace gridcube
