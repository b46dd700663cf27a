#pragma once

#include <vector>

#include "sievebound/integer.hpp"
#include "sievebound/primes.hpp"

namespace sievebound {

/// A fixed finite set of primes together with the derived quantities that
/// the bound formulas consume: P (the product of the members) and
/// phi(P) (the product of p-1 over the members).
struct PrimeBasis {
  std::vector<u64> primes;  // sorted, distinct
  Int product = 1;          // P
  Int phi = 1;              // phi(P)

  PrimeBasis() = default;

  explicit PrimeBasis(std::vector<u64> members) {
    std::sort(members.begin(), members.end());
    for (size_t i = 0; i < members.size(); ++i) {
      const u64 p = members[i];
      if (!is_prime_u64(p))
        throw std::invalid_argument("PrimeBasis: " + std::to_string(p) + " is not prime");
      if (i > 0 && members[i - 1] == p)
        throw std::invalid_argument("PrimeBasis: duplicate member " + std::to_string(p));
      product *= p;
      phi *= p - 1;
    }
    primes = std::move(members);
  }

  size_t size() const { return primes.size(); }
  bool empty() const { return primes.empty(); }
  bool contains(u64 p) const {
    return std::binary_search(primes.begin(), primes.end(), p);
  }
};

}  // namespace sievebound
