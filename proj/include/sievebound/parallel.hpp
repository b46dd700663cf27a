#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "sievebound/config.hpp"

namespace sievebound {

/// Runs fn(shard) for shard = 0..shard_count-1 on a small worker pool and
/// returns the per-shard results in shard order.  Shard boundaries never
/// depend on the pool size, so reductions over the returned vector are
/// identical for any thread count.
template <typename T, typename Fn>
std::vector<T> run_shards(u64 shard_count, int threads, Fn&& fn) {
  std::vector<T> results(shard_count);
  if (shard_count == 0) return results;
  const int pool = std::min<int>(effective_threads(threads), static_cast<int>(shard_count));
  if (pool <= 1) {
    for (u64 s = 0; s < shard_count; ++s) results[s] = fn(s);
    return results;
  }
  std::atomic<u64> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const u64 s = next.fetch_add(1);
      if (s >= shard_count) return;
      try {
        results[s] = fn(s);
      } catch (...) {
        std::scoped_lock lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool_threads;
  pool_threads.reserve(pool);
  for (int i = 0; i < pool; ++i) pool_threads.emplace_back(worker);
  for (auto& t : pool_threads) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace sievebound
