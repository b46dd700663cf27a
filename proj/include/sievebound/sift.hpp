#pragma once

#include <vector>

#include "sievebound/config.hpp"
#include "sievebound/integer.hpp"
#include "sievebound/parallel.hpp"
#include "sievebound/primes.hpp"
#include "sievebound/residue.hpp"

namespace sievebound {

/// Half-open run of integers [start, start + length).
struct Interval {
  Int start = 1;
  u64 length = 0;
};

namespace detail {

// Exact survivor count on one window via a marking sieve: each sifted class
// steps through the window at its prime's stride.
inline u64 sift_window(const Int& start, u64 len, const ResidueSystem& sys,
                       std::vector<char>& marks) {
  marks.assign(len, 0);
  for (const auto& [p, cl] : sys.classes) {
    const u32 s0 = Int(start % p).convert_to<u32>();  // start == s0 (mod p)
    for (u32 c : cl) {
      u64 off = (c >= s0) ? (c - s0) : (p - s0 + c);
      for (; off < len; off += p) marks[off] = 1;
    }
  }
  u64 survivors = 0;
  for (u64 i = 0; i < len; ++i) survivors += !marks[i];
  return survivors;
}

}  // namespace detail

/// Exact count of integers in the interval lying outside every sifted class
/// (the empirical S(A, z)).  Range-sharded with fixed shard boundaries, so
/// the result is identical for every worker-pool size.
inline u64 sift_count(const Interval& interval, const ResidueSystem& sys,
                      const Budgets& budgets = {}) {
  if (interval.start < 0) throw std::invalid_argument("sift_count: start must be >= 0");
  if (interval.length == 0) return 0;
  if (interval.length > budgets.sift_length)
    throw budget_error("sift_count: interval length " + std::to_string(interval.length) +
                       " exceeds sift_length budget");
  constexpr u64 kShard = 1u << 20;
  const u64 shards = (interval.length + kShard - 1) / kShard;
  auto counts = run_shards<u64>(shards, budgets.threads, [&](u64 s) {
    const u64 lo = s * kShard;
    const u64 len = std::min(kShard, interval.length - lo);
    std::vector<char> marks;
    return detail::sift_window(interval.start + lo, len, sys, marks);
  });
  u64 total = 0;
  for (u64 c : counts) total += c;
  return total;
}

/// Number of primes q <= x such that no r in U divides
/// sigma(q^(l-1)) = 1 + q + ... + q^(l-1).  Every r in U must be a prime
/// == 1 (mod l); the check itself is direct divisibility.
inline u64 count_sieve_survivor_primes(u64 x, u32 l, const std::vector<u64>& U,
                                       const Budgets& budgets = {}) {
  for (u64 r : U) {
    if (!is_prime_u64(r) || r % l != 1)
      throw std::invalid_argument("count_sieve_survivor_primes: U member " + std::to_string(r) +
                                  " is not a prime == 1 mod " + std::to_string(l));
  }
  constexpr u64 kShard = 1u << 22;
  const u64 shards = (x + kShard - 1) / kShard;
  auto counts = run_shards<u64>(shards, budgets.threads, [&](u64 s) {
    const u64 lo = std::max<u64>(2, s * kShard + 1);
    const u64 hi = std::min(x, (s + 1) * kShard);
    if (hi < lo) return u64(0);
    u64 c = 0;
    // sieve just this window for primes
    const auto base = small_primes_up_to(static_cast<u32>(std::sqrt(static_cast<double>(hi))) + 1);
    std::vector<char> comp(hi - lo + 1, 0);
    for (u32 p : base) {
      u64 first = std::max<u64>(static_cast<u64>(p) * p, ((lo + p - 1) / p) * p);
      for (u64 m = first; m <= hi; m += p) comp[m - lo] = 1;
    }
    for (u64 q = lo; q <= hi; ++q) {
      if (comp[q - lo]) continue;
      bool survives = true;
      for (u64 r : U) {
        if (geometric_sum_mod(q, l, r) == 0) {
          survives = false;
          break;
        }
      }
      c += survives;
    }
    return c;
  });
  u64 total = 0;
  for (u64 c : counts) total += c;
  return total;
}

}  // namespace sievebound
