#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace terrakit {

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Calls fn(row_begin, row_end) over contiguous row blocks on up to `workers`
/// threads. Blocks are disjoint, so per-cell kernels give the same bits for
/// any worker count. The first exception thrown by a worker is rethrown.
template <class Fn>
void parallel_rows(std::size_t nrows, unsigned workers, Fn&& fn) {
  workers = resolve_workers(workers);
  const std::size_t blocks = std::min<std::size_t>(workers, nrows);
  if (blocks <= 1) {
    fn(std::size_t{0}, nrows);
    return;
  }
  std::vector<std::exception_ptr> errors(blocks);
  std::vector<std::thread> pool;
  pool.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = nrows * b / blocks;
    const std::size_t end = nrows * (b + 1) / blocks;
    pool.emplace_back([&, b, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace terrakit
