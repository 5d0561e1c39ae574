#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace uet {

/// Evaluates fn(i) for i in [0, count) into an indexed output vector,
/// optionally across threads. Each slot is written exactly once, so the
/// result is identical for any thread count; folds over it stay sequential.
/// If workers throw, the exception from the lowest index is rethrown.
template <typename R, typename Fn>
std::vector<R> map_indexed(std::size_t count, int threads, Fn&& fn) {
  std::vector<R> out(count);
  if (threads <= 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  const std::size_t chunk = std::max<std::size_t>(1, count / (n_threads * 8));
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = count;
  std::exception_ptr err;

  auto worker = [&]() {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::size_t end = std::min(begin + chunk, count);
      for (std::size_t i = begin; i < end; ++i) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (i < err_index) {
            err_index = i;
            err = std::current_exception();
          }
          return;
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace uet
