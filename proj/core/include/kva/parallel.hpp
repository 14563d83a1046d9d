#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kva {

// Paths are processed in fixed-size blocks so that per-block partial sums,
// reduced in block order, do not depend on the worker count.
inline constexpr std::size_t kPathBlock = 512;

// Worker count: XVA_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs fn(begin, end) over [0, n) in blocks of kPathBlock on up to
// worker_count() threads. Blocks may run in any order.
void parallel_for_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

// Runs fn(begin, end) per block and returns the per-block results in
// block order.
template <typename T, typename Fn>
std::vector<T> map_blocks(std::size_t n, Fn&& fn) {
  const std::size_t blocks = (n + kPathBlock - 1) / kPathBlock;
  std::vector<T> out(blocks);
  parallel_for_blocks(n, [&](std::size_t begin, std::size_t end) {
    out[begin / kPathBlock] = fn(begin, end);
  });
  return out;
}

}  // namespace kva
