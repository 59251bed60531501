#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hypex {

namespace detail {
inline std::atomic<unsigned> &thread_setting() {
  static std::atomic<unsigned> value{0};
  return value;
}
} // namespace detail

/// Worker count used by internal parallel loops; 0 means all cores.
/// Results never depend on this value.
inline void set_threads(unsigned n) { detail::thread_setting() = n; }

inline unsigned threads() {
  unsigned n = detail::thread_setting();
  if (n == 0)
    n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace detail {

/// Runs body(chunk_index, begin, end) over [0, n) split into contiguous
/// chunks. Exceptions from workers are rethrown on the caller's thread.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunks, Body &&body) {
  if (n == 0)
    return;
  chunks = std::clamp<std::size_t>(chunks, 1, n);
  const unsigned workers = std::min<std::size_t>(threads(), chunks);
  auto range = [&](std::size_t c) {
    return std::pair{n * c / chunks, n * (c + 1) / chunks};
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = range(c);
      body(c, b, e);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks && !failed; c = next++) {
        try {
          auto [b, e] = range(c);
          body(c, b, e);
        } catch (...) {
          if (!failed.exchange(true))
            failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace detail
} // namespace hypex
