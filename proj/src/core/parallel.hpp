#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace gsc {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(chunk_index, begin, end) over [0, n) split into contiguous chunks.
// Chunk boundaries depend only on (n, threads), never on scheduling, so
// per-chunk partial results can be reduced in chunk order for bit-reproducible
// output regardless of the thread count.
template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  if (n == 0) return;
  const int nt = resolve_threads(threads);
  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
  if (chunks <= 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  const std::size_t per = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t b = c * per;
    const std::size_t e = std::min(n, b + per);
    if (b >= e) break;
    pool.emplace_back([&fn, c, b, e] { fn(c, b, e); });
  }
  fn(std::size_t{0}, std::size_t{0}, std::min(n, per));
  for (auto& t : pool) t.join();
}

}  // namespace gsc
