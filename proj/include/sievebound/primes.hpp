#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "sievebound/integer.hpp"

namespace sievebound {

/// Primes up to and including `limit`, by a plain sieve of Eratosthenes.
inline std::vector<u32> small_primes_up_to(u32 limit) {
  std::vector<u32> out;
  if (limit < 2) return out;
  std::vector<bool> comp(static_cast<size_t>(limit) + 1, false);
  for (u64 i = 2; i * i <= limit; ++i)
    if (!comp[i])
      for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
  for (u64 i = 2; i <= limit; ++i)
    if (!comp[i]) out.push_back(static_cast<u32>(i));
  return out;
}

/// Calls `fn(p)` for every prime p <= limit in ascending order.
/// Segmented so memory stays bounded for limits around 1e9.
template <typename Fn>
void for_each_prime(u64 limit, Fn&& fn) {
  if (limit < 2) return;
  u64 root = static_cast<u64>(std::sqrt(static_cast<double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;
  const std::vector<u32> base = small_primes_up_to(static_cast<u32>(root));
  for (u32 p : base) fn(static_cast<u64>(p));

  constexpr u64 kSegment = 1u << 20;
  std::vector<char> sieve(kSegment);
  for (u64 lo = root + 1; lo <= limit; lo += kSegment) {
    const u64 hi = std::min(limit, lo + kSegment - 1);
    const u64 len = hi - lo + 1;
    std::fill(sieve.begin(), sieve.begin() + len, 1);
    for (u32 p : base) {
      if (static_cast<u64>(p) * p > hi) break;
      u64 start = ((lo + p - 1) / p) * p;
      for (u64 j = start; j <= hi; j += p) sieve[j - lo] = 0;
    }
    for (u64 i = 0; i < len; ++i)
      if (sieve[i]) fn(lo + i);
  }
}

inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  for_each_prime(limit, [&](u64 p) { out.push_back(p); });
  return out;
}

/// Primes p <= limit with p == a (mod k), ascending.  Rejects gcd(a,k) != 1
/// (such a class contains at most the single prime gcd(a,k)).
inline std::vector<u64> primes_in_progression(u64 limit, u64 k, u64 a) {
  if (k == 0) throw std::invalid_argument("primes_in_progression: k must be >= 1");
  a %= k;
  if (std::gcd(a, k) != 1)
    throw std::invalid_argument("primes_in_progression: gcd(a,k) must be 1");
  std::vector<u64> out;
  for_each_prime(limit, [&](u64 p) {
    if (p % k == a) out.push_back(p);
  });
  return out;
}

/// Deterministic Miller-Rabin for 64-bit inputs (the twelve-prime witness
/// set is known exact far beyond 2^64).
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace detail {

inline Int pow_mod_int(Int base, Int exp, const Int& m) {
  Int r = 1;
  base %= m;
  while (exp > 0) {
    if (boost::multiprecision::bit_test(exp, 0)) r = r * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return r;
}

inline bool miller_rabin_int(const Int& n, const Int& a) {
  Int d = n - 1;
  int s = 0;
  while (!boost::multiprecision::bit_test(d, 0)) d >>= 1, ++s;
  Int x = pow_mod_int(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n - 1) return true;
  }
  return false;
}

// Strong Lucas test with Selfridge parameters.  Together with base-2
// Miller-Rabin this is the Baillie-PSW certificate; no composite passing
// it is known, and the scans only ever reach ~2^128.
inline bool strong_lucas(const Int& n) {
  auto jacobi = [](Int a, Int m) {
    a %= m;
    if (a < 0) a += m;
    int result = 1;
    while (a != 0) {
      while (!boost::multiprecision::bit_test(a, 0)) {
        a >>= 1;
        const Int r = m % 8;
        if (r == 3 || r == 5) result = -result;
      }
      std::swap(a, m);
      if (a % 4 == 3 && m % 4 == 3) result = -result;
      a %= m;
    }
    return m == 1 ? result : 0;
  };

  Int d = 5;
  int sign = 1;
  while (true) {
    const Int D = d * sign;
    const int j = jacobi(D, n);
    if (j == -1) {
      d = D;
      break;
    }
    if (j == 0 && boost::multiprecision::abs(D) != n) return false;
    d += 2;
    sign = -sign;
  }
  const Int p = 1;
  const Int q = (1 - d) / 4;

  Int delta = n + 1;
  int s = 0;
  while (!boost::multiprecision::bit_test(delta, 0)) delta >>= 1, ++s;

  // Lucas sequence by binary ladder on (U, V, Q^k).
  Int u = 0, v = 2, qk = 1;
  const Int half = (n + 1) / 2;  // inverse of 2 mod n for odd n
  const unsigned top = boost::multiprecision::msb(delta);
  for (int i = static_cast<int>(top); i >= 0; --i) {
    u = u * v % n;
    v = (v * v - 2 * qk) % n;
    qk = qk * qk % n;
    if (boost::multiprecision::bit_test(delta, static_cast<unsigned>(i))) {
      Int tu = (u * p + v) % n;
      tu = tu * half % n;
      Int tv = (d * u + p * v) % n;
      tv = tv * half % n;
      u = tu;
      v = tv;
      qk = qk * q % n;
    }
    if (u < 0) u += n;
    if (v < 0) v += n;
    if (qk < 0) qk += n;
  }
  if (u == 0 || v == 0) return true;
  for (int r = 1; r < s; ++r) {
    v = (v * v - 2 * qk) % n;
    if (v < 0) v += n;
    if (v == 0) return true;
    qk = qk * qk % n;
  }
  return false;
}

}  // namespace detail

/// Primality for arbitrary-precision input.  64-bit inputs get the exact
/// Miller-Rabin witness set; larger ones get Baillie-PSW.
inline bool is_prime(const Int& n) {
  if (n <= std::numeric_limits<u64>::max())
    return is_prime_u64(n.convert_to<u64>());
  if (!boost::multiprecision::bit_test(n, 0)) return false;
  for (u32 p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 43u, 47u})
    if (n % p == 0) return false;
  if (!detail::miller_rabin_int(n, 2)) return false;
  if (!detail::miller_rabin_int(n, 3)) return false;
  return detail::strong_lucas(n);
}

inline u64 next_prime_above(u64 n) {
  u64 c = n + 1;
  if (c <= 2) return 2;
  if (c % 2 == 0) ++c;
  while (!is_prime_u64(c)) c += 2;
  return c;
}

namespace detail {

// Shared ascending prime table for trial division.  Grown on demand;
// callers receive an immutable snapshot so concurrent growth never
// invalidates a table another thread is walking.
class PrimeCache {
 public:
  static constexpr u64 kCeiling = 10'000'000;  // trial-division stage ends here

  // Returns primes up to at least min(want, ceiling).
  std::shared_ptr<const std::vector<u32>> at_least(u64 want) {
    const u64 target = std::min<u64>(std::max<u64>(want, 1u << 16), kCeiling);
    std::scoped_lock lock(mu_);
    if (limit_ < target) {
      u64 next = std::max<u64>(limit_ * 4, target);
      next = std::min<u64>(next, kCeiling);
      primes_ = std::make_shared<const std::vector<u32>>(
          small_primes_up_to(static_cast<u32>(next)));
      limit_ = next;
    }
    return primes_;
  }

  static PrimeCache& instance() {
    static PrimeCache cache;
    return cache;
  }

 private:
  std::mutex mu_;
  u64 limit_ = 0;
  std::shared_ptr<const std::vector<u32>> primes_;
};

}  // namespace detail

}  // namespace sievebound
