#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace sobex {

namespace detail {
inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs body(chunk) for chunk = 0..chunks-1 across a thread pool. Chunk
// boundaries are fixed, so per-chunk outputs are reproducible for any
// thread count.
inline void run_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body, int threads) {
  threads = resolve_threads(threads);
  if (threads <= 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t c = static_cast<std::size_t>(t); c < chunks; c += static_cast<std::size_t>(threads)) body(c);
    });
  for (auto& th : pool) th.join();
}
}  // namespace detail

// Deterministic parallel loop over [0, count): body receives half-open
// subranges with thread-count-independent boundaries.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                         int threads = 0) {
  if (count == 0) return;
  if (count < 2048 || detail::resolve_threads(threads) <= 1) {
    body(0, count);
    return;
  }
  const std::size_t chunks = 64;
  const std::size_t step = (count + chunks - 1) / chunks;
  detail::run_chunks(
      (count + step - 1) / step,
      [&](std::size_t c) { body(c * step, std::min(count, c * step + step)); }, threads);
}

// Chunked sum with fixed chunk boundaries and a sequential final reduction;
// bitwise identical for any thread count.
inline double parallel_sum(std::size_t count, const std::function<double(std::size_t)>& term,
                           int threads = 0) {
  if (count == 0) return 0.0;
  const std::size_t chunks = 64;
  const std::size_t step = (count + chunks - 1) / chunks;
  const std::size_t used = (count + step - 1) / step;
  std::vector<double> partial(used, 0.0);
  if (count < 2048 || detail::resolve_threads(threads) <= 1) {
    for (std::size_t c = 0; c < used; ++c) {
      double s = 0;
      for (std::size_t i = c * step, e = std::min(count, c * step + step); i < e; ++i) s += term(i);
      partial[c] = s;
    }
  } else {
    detail::run_chunks(
        used,
        [&](std::size_t c) {
          double s = 0;
          for (std::size_t i = c * step, e = std::min(count, c * step + step); i < e; ++i) s += term(i);
          partial[c] = s;
        },
        threads);
  }
  double total = 0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace sobex
