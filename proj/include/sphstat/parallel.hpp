#pragma once

#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

namespace sphstat {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Static block partition of [begin, end) across `threads` workers. Each chunk
/// sees a contiguous index range, so results written to per-index slots are
/// identical for every thread count.
template <typename Body>
inline void parallel_chunks(std::size_t begin, std::size_t end, unsigned threads, Body&& body) {
  const std::size_t total = end > begin ? end - begin : 0;
  if (total == 0) return;
  unsigned workers = resolve_threads(threads);
  if (static_cast<std::size_t>(workers) > total) workers = static_cast<unsigned>(total);
  if (workers <= 1) {
    body(begin, end);
    return;
  }
  const std::size_t chunk = (total + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) {
    const std::size_t lo = begin + static_cast<std::size_t>(w) * chunk;
    if (lo >= end) break;
    const std::size_t hi = std::min(end, lo + chunk);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  body(begin, std::min(end, begin + chunk));
  for (auto& t : pool) t.join();
}

}  // namespace sphstat
