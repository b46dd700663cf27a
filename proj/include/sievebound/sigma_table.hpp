#pragma once

#include <span>
#include <vector>

#include "sievebound/config.hpp"
#include "sievebound/integer.hpp"

namespace sievebound {

namespace detail {

// Fills values[i] = sigma(lo + i) for the window [lo, hi) by divisor
// accumulation: every d <= hi contributes d to each of its multiples in the
// window.  Exact in u64 for any window the budgets allow.
inline void sigma_window(u64 lo, u64 hi, std::span<u64> values) {
  std::fill(values.begin(), values.end(), 0);
  for (u64 d = 1; d < hi; ++d) {
    u64 m = std::max(d, ((lo + d - 1) / d) * d);
    for (; m < hi; m += d) values[m - lo] += d;
  }
}

}  // namespace detail

/// Dense table of sigma values; slot n holds sigma(n) for 1 <= n <= limit.
struct SigmaTable {
  u64 limit = 0;
  std::vector<u64> values;  // values[n], index 0 unused

  u64 at(u64 n) const { return values[n]; }
};

/// Builds the dense table with the divisor-accumulation sieve, working in
/// fixed-size segments so memory during construction stays bounded.
inline SigmaTable sigma_table(u64 limit, const Budgets& budgets = {}) {
  if (limit < 1) throw std::invalid_argument("sigma_table: limit must be >= 1");
  if (limit > budgets.sigma_table_entries)
    throw budget_error("sigma_table: limit " + std::to_string(limit) +
                       " exceeds sigma_table_entries budget " +
                       std::to_string(budgets.sigma_table_entries));
  SigmaTable t;
  t.limit = limit;
  t.values.assign(limit + 1, 0);
  const u64 seg = std::max<u64>(budgets.scan_segment, 1024);
  for (u64 lo = 1; lo <= limit; lo += seg) {
    const u64 hi = std::min(limit + 1, lo + seg);
    detail::sigma_window(lo, hi, std::span<u64>(t.values.data() + lo, hi - lo));
  }
  return t;
}

/// Streams sigma values over [1, limit] one segment at a time without
/// materializing the whole table: fn(start, values) where values[i] is
/// sigma(start + i).  The scans are built on this.
template <typename Fn>
void for_each_sigma_segment(u64 limit, u64 segment_length, Fn&& fn) {
  const u64 seg = std::max<u64>(segment_length, 1024);
  std::vector<u64> buf;
  for (u64 lo = 1; lo <= limit; lo += seg) {
    const u64 hi = std::min(limit + 1, lo + seg);
    buf.resize(hi - lo);
    detail::sigma_window(lo, hi, buf);
    fn(lo, std::span<const u64>(buf.data(), buf.size()));
  }
}

}  // namespace sievebound
