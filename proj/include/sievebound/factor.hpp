#pragma once

#include <utility>
#include <vector>

#include "sievebound/basis.hpp"
#include "sievebound/integer.hpp"
#include "sievebound/primes.hpp"

namespace sievebound {

/// Ordered prime factorization.  Primes strictly increasing, exponents >= 1,
/// and the product of prime^exponent reconstructs the input (n = 1 is the
/// empty list).
struct Factorization {
  std::vector<std::pair<Int, unsigned>> entries;

  Int value() const {
    Int v = 1;
    for (const auto& [p, e] : entries)
      for (unsigned i = 0; i < e; ++i) v *= p;
    return v;
  }
};

namespace detail {

inline u64 pollard_brent_u64(u64 n) {
  // Brent's cycle variant; n is odd, composite, with no small prime factor.
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    u64 power = 1, lam = 1;
    while (d == 1) {
      if (power == lam) {
        x = y;
        power *= 2;
        lam = 0;
      }
      // batch |x-y| products to cut gcd calls
      const u64 steps = std::min<u64>(power - lam, 128);
      u64 q = 1;
      const u64 ys = y;
      for (u64 i = 0; i < steps; ++i) {
        y = (mul_mod(y, y, n) + c) % n;
        q = mul_mod(q, x > y ? x - y : y - x, n);
      }
      lam += steps;
      d = std::gcd(q, n);
      if (d == n) {
        // the batch jumped past a factor; redo one step at a time
        y = ys;
        d = 1;
        do {
          y = (mul_mod(y, y, n) + c) % n;
          d = std::gcd(x > y ? x - y : y - x, n);
        } while (d == 1);
        break;
      }
    }
    if (d != n && d != 1) return d;
    // cycle closed without a proper factor: retry with the next constant
  }
}

inline Int pollard_brent_int(const Int& n) {
  if (n <= std::numeric_limits<u64>::max()) return pollard_brent_u64(n.convert_to<u64>());
  for (Int c = 1;; ++c) {
    Int x = 2, y = 2, d = 1;
    u64 power = 1, lam = 1;
    while (d == 1) {
      if (power == lam) {
        x = y;
        power *= 2;
        lam = 0;
      }
      y = (y * y + c) % n;
      ++lam;
      const Int diff = x > y ? x - y : y - x;
      d = boost::multiprecision::gcd(diff, n);
    }
    if (d != n) return d;
  }
}

template <typename I>
void factor_rest(const I& n, std::vector<I>& primes_out);

template <>
inline void factor_rest<u64>(const u64& n, std::vector<u64>& primes_out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    primes_out.push_back(n);
    return;
  }
  const u64 d = pollard_brent_u64(n);
  factor_rest<u64>(d, primes_out);
  u64 q = n / d;
  factor_rest<u64>(q, primes_out);
}

template <>
inline void factor_rest<Int>(const Int& n, std::vector<Int>& primes_out) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes_out.push_back(n);
    return;
  }
  const Int d = pollard_brent_int(n);
  factor_rest<Int>(d, primes_out);
  Int q = n / d;
  factor_rest<Int>(q, primes_out);
}

// Trial division by the shared sieved-prime table, then Pollard-Brent on the
// remaining cofactor.  Works in machine words when the input allows it.
template <typename I>
std::vector<std::pair<I, unsigned>> factorize_impl(I n) {
  std::vector<std::pair<I, unsigned>> out;
  I c = n;
  u64 table_limit = 1u << 16;
  auto table = PrimeCache::instance().at_least(table_limit);
  size_t idx = 0;
  bool exhausted = false;
  while (c > 1) {
    if (idx == table->size()) {
      // before sieving a bigger table, see if the cofactor is already prime
      bool cofactor_prime;
      if constexpr (std::is_same_v<I, u64>) cofactor_prime = is_prime_u64(c);
      else cofactor_prime = is_prime(c);
      if (cofactor_prime) {
        out.emplace_back(c, 1);
        return out;
      }
      if (table_limit >= PrimeCache::kCeiling) {
        exhausted = true;
        break;
      }
      table_limit = std::min<u64>(table_limit * 16, PrimeCache::kCeiling);
      const u64 prev_top = table->back();
      table = PrimeCache::instance().at_least(table_limit);
      while (idx < table->size() && (*table)[idx] <= prev_top) ++idx;
      continue;
    }
    const u64 p = (*table)[idx];
    if (I(p) * p > c) {
      out.emplace_back(c, 1);
      return out;
    }
    if (c % p == 0) {
      unsigned e = 0;
      do {
        c /= p;
        ++e;
      } while (c % p == 0);
      out.emplace_back(I(p), e);
      if (c == 1) return out;
      if constexpr (std::is_same_v<I, u64>) {
        if (is_prime_u64(c)) {
          out.emplace_back(c, 1);
          return out;
        }
      } else {
        if (is_prime(c)) {
          out.emplace_back(c, 1);
          return out;
        }
      }
    }
    ++idx;
  }
  if (exhausted && c > 1) {
    std::vector<I> rest;
    factor_rest<I>(c, rest);
    std::sort(rest.begin(), rest.end());
    for (size_t i = 0; i < rest.size();) {
      size_t j = i;
      while (j < rest.size() && rest[j] == rest[i]) ++j;
      out.emplace_back(rest[i], static_cast<unsigned>(j - i));
      i = j;
    }
  }
  return out;
}

}  // namespace detail

/// Prime factorization of n >= 1 (n = 1 yields the empty list).
inline Factorization factorize(const Int& n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
  Factorization f;
  if (n == 1) return f;
  if (n <= std::numeric_limits<u64>::max()) {
    for (const auto& [p, e] : detail::factorize_impl<u64>(n.convert_to<u64>()))
      f.entries.emplace_back(Int(p), e);
  } else {
    f.entries = detail::factorize_impl<Int>(n);
  }
  return f;
}

/// Sum of divisors from a factorization: prod (p^(e+1)-1)/(p-1).
inline Int sigma(const Factorization& f) {
  Int s = 1;
  for (const auto& [p, e] : f.entries) {
    Int term = 1, pk = 1;
    for (unsigned i = 0; i < e; ++i) {
      pk *= p;
      term += pk;
    }
    s *= term;
  }
  return s;
}

inline Int sigma_of(const Int& n) { return sigma(factorize(n)); }

/// Abundancy h(n) = sigma(n)/n as an exact reduced fraction.
inline Rat abundancy(const Factorization& f) {
  return Rat(sigma(f), f.value());
}

struct OmegaCounts {
  u64 distinct = 0;           // omega
  u64 with_multiplicity = 0;  // Omega
  u64 in_basis = 0;           // Omega restricted to basis members
};

inline OmegaCounts omega_counts(const Factorization& f, const PrimeBasis& basis) {
  OmegaCounts c;
  for (const auto& [p, e] : f.entries) {
    c.distinct += 1;
    c.with_multiplicity += e;
    if (p <= std::numeric_limits<u64>::max() && basis.contains(p.convert_to<u64>()))
      c.in_basis += e;
  }
  return c;
}

}  // namespace sievebound
