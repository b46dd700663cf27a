#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sievebound {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr double kEulerGamma = 0.5772156649015329;

/// Thrown when a configured budget (scan range, enumeration nodes, table
/// size) would be exceeded.  The CLI maps it to exit code 3.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((u128(a) * b) % m);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

// 1 + q + q^2 + ... + q^(l-1) mod m, the value sigma(q^(l-1)) reduces to.
inline u64 geometric_sum_mod(u64 q, unsigned l, u64 m) {
  if (m == 1) return 0;
  u64 s = 0, term = 1 % m;
  q %= m;
  for (unsigned i = 0; i < l; ++i) {
    s = (s + term) % m;
    term = mul_mod(term, q, m);
  }
  return s;
}

/// Natural logarithm of a positive big integer, usable far beyond the
/// double range (the value itself may have millions of bits).
inline double ln_of(const Int& n) {
  if (n <= 0) throw std::invalid_argument("ln_of: argument must be positive");
  if (n == 1) return 0.0;
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
  if (bits <= 1000) return std::log(n.convert_to<double>());
  const unsigned shift = bits - 64;
  const Int top = n >> shift;
  return std::log(top.convert_to<double>()) + shift * 0.6931471805599453;
}

inline double to_double_checked(const Int& n, const char* what) {
  const double d = n.convert_to<double>();
  if (!std::isfinite(d))
    throw std::range_error(std::string(what) + ": value exceeds double range");
  return d;
}

inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
  if (n < 0) return false;
  const Int r = boost::multiprecision::sqrt(n);
  if (root) *root = r;
  return r * r == n;
}

// FNV-1a, used for output digests and scan-ledger checksums.
inline u64 fnv1a64(std::string_view bytes, u64 seed = 0xcbf29ce484222325ull) {
  u64 h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Compensated (Kahan) accumulator for the long real sums in the sieve
// quantities; keeps desk-scale inequality tests away from rounding noise.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace sievebound
