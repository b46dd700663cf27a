#pragma once

// Independent brute-force oracles for the unit and acceptance tests.  These
// deliberately avoid the library's own code paths: divisor sums by plain
// divisor enumeration, factorization by raw trial division, order checks by
// iterated multiplication, and so on.

#include <cstdint>
#include <map>
#include <vector>

#include "sievebound/integer.hpp"

namespace oracle {

using sievebound::Int;
using sievebound::u64;

inline u64 naive_sigma(u64 n) {
  u64 s = 0;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      s += d;
      if (d != n / d) s += n / d;
    }
  }
  return s;
}

inline std::map<u64, unsigned> naive_factorize(u64 n) {
  std::map<u64, unsigned> f;
  for (u64 p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      f[p] += 1;
      n /= p;
    }
  }
  if (n > 1) f[n] += 1;
  return f;
}

inline bool naive_is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> naive_primes(u64 limit) {
  std::vector<u64> out;
  for (u64 n = 2; n <= limit; ++n)
    if (naive_is_prime(n)) out.push_back(n);
  return out;
}

// multiplicative order of q mod r, or 0 when gcd(q, r) != 1
inline u64 naive_order(u64 q, u64 r) {
  q %= r;
  if (q == 0) return 0;
  u64 x = q % r, ord = 1;
  while (x != 1) {
    x = (x * q) % r;  // callers keep r below 2^32
    ++ord;
    if (ord > r) return 0;
  }
  return ord;
}

}  // namespace oracle
