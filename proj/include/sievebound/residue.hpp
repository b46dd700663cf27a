#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "sievebound/basis.hpp"
#include "sievebound/integer.hpp"
#include "sievebound/primes.hpp"

namespace sievebound {

/// Per-prime sifted residue classes: for every prime p < z, the set of
/// classes mod p that the sieve removes.  Invariant: rho(p) = |classes| < p,
/// which is the hypothesis of the large-sieve upper bound.
struct ResidueSystem {
  double z = 0;
  // sorted by prime; every prime < z appears, classes sorted, each in [0, p)
  std::vector<std::pair<u32, std::vector<u32>>> classes;

  u64 rho(u32 p) const {
    for (const auto& [q, cl] : classes)
      if (q == p) return cl.size();
    return 0;
  }

  /// The same system truncated to primes p < w (the G(w) evaluation set).
  ResidueSystem restrict_to(double w) const {
    ResidueSystem r;
    r.z = w;
    for (const auto& [p, cl] : classes)
      if (p < w) r.classes.emplace_back(p, cl);
    return r;
  }

  void validate() const {
    u32 prev = 0;
    for (const auto& [p, cl] : classes) {
      if (p <= prev) throw std::invalid_argument("ResidueSystem: primes must be ascending");
      prev = p;
      if (cl.empty()) continue;
      if (cl.size() >= p)
        throw std::invalid_argument("ResidueSystem: rho(p) must be < p at p = " + std::to_string(p));
      u32 last = 0;
      bool first = true;
      for (u32 c : cl) {
        if (c >= p) throw std::invalid_argument("ResidueSystem: class out of range at p = " + std::to_string(p));
        if (!first && c <= last) throw std::invalid_argument("ResidueSystem: classes must be ascending");
        last = c;
        first = false;
      }
    }
  }
};

/// The l-1 residues of multiplicative order exactly l modulo r, for prime
/// r == 1 (mod l) and prime l.  These are the roots of
/// (x^l - 1)/(x - 1) mod r.
inline std::vector<u32> order_l_residues(u32 r, u32 l) {
  if (!is_prime_u64(r)) throw std::invalid_argument("order_l_residues: r must be prime");
  if (!is_prime_u64(l)) throw std::invalid_argument("order_l_residues: l must be prime");
  if (r % l != 1)
    throw std::invalid_argument("order_l_residues: r = " + std::to_string(r) +
                                " is not 1 mod " + std::to_string(l));
  // any h with h^((r-1)/l) != 1 yields a generator of the order-l subgroup
  const u64 e = (r - 1) / l;
  u64 w = 1;
  for (u64 h = 2; h < r; ++h) {
    w = pow_mod(h, e, r);
    if (w != 1) break;
  }
  std::vector<u32> out;
  out.reserve(l - 1);
  u64 x = w;
  for (u32 i = 1; i < l; ++i) {
    out.push_back(static_cast<u32>(x));
    x = mul_mod(x, w, r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Residue system for the multiperfect sieve: primes r in U sift the class
/// 0 together with the order-l classes (rho = l); every other prime p < z
/// sifts only 0 (rho = 1).  Every r in U must be == 1 (mod l).
inline ResidueSystem thm1_residue_system(u32 l, const std::vector<u64>& U, double z) {
  if (!(z > 2)) throw std::invalid_argument("thm1_residue_system: z must exceed 2");
  std::vector<u64> members = U;
  std::sort(members.begin(), members.end());
  for (u64 r : members) {
    if (!is_prime_u64(r) || r % l != 1)
      throw std::invalid_argument("thm1_residue_system: U member " + std::to_string(r) +
                                  " is not a prime == 1 mod " + std::to_string(l));
  }
  ResidueSystem sys;
  sys.z = z;
  for_each_prime(static_cast<u64>(std::ceil(z)) + 1, [&](u64 p) {
    if (!(static_cast<double>(p) < z)) return;
    std::vector<u32> cl{0};
    if (std::binary_search(members.begin(), members.end(), p)) {
      for (u32 g : order_l_residues(static_cast<u32>(p), l)) cl.push_back(g);
      std::sort(cl.begin(), cl.end());
    }
    sys.classes.emplace_back(static_cast<u32>(p), std::move(cl));
  });
  sys.validate();
  return sys;
}

/// The unique classes a1, a2 mod 8l with a == 1 (mod l) and a == 5 resp. 7
/// (mod 8), for odd prime l.
inline std::pair<u64, u64> congruence_classes_a1_a2(u32 l) {
  if (l == 2 || !is_prime_u64(l))
    throw std::invalid_argument("congruence_classes_a1_a2: l must be an odd prime");
  const u64 m = 8ull * l;
  u64 a1 = 0, a2 = 0;
  for (u64 a = 1; a < m; a += 2) {
    if (a % l != 1) continue;
    if (a % 8 == 5) a1 = a;
    if (a % 8 == 7) a2 = a;
  }
  return {a1, a2};
}

/// Residue system for the quasiperfect/amicable sieve: a prime p < z that is
/// == a1 or a2 (mod 8l) sifts 0 together with the roots of
/// x^(l-1) + ... + 1 mod p.  Such p are == 1 (mod l), so the roots are the
/// order-l classes and rho(p) = l.  Other primes sift only 0.
inline ResidueSystem thm4_residue_system(u32 l, double z) {
  if (l == 2 || !is_prime_u64(l))
    throw std::invalid_argument("thm4_residue_system: l must be an odd prime");
  if (!(z > 2)) throw std::invalid_argument("thm4_residue_system: z must exceed 2");
  const auto [a1, a2] = congruence_classes_a1_a2(l);
  const u64 m = 8ull * l;
  ResidueSystem sys;
  sys.z = z;
  for_each_prime(static_cast<u64>(std::ceil(z)) + 1, [&](u64 p) {
    if (!(static_cast<double>(p) < z)) return;
    std::vector<u32> cl{0};
    const u64 a = p % m;
    if (a == a1 || a == a2) {
      for (u32 g : order_l_residues(static_cast<u32>(p), l)) cl.push_back(g);
      std::sort(cl.begin(), cl.end());
    }
    sys.classes.emplace_back(static_cast<u32>(p), std::move(cl));
  });
  sys.validate();
  return sys;
}

/// Text form used by `sieve verify` and the golden files: one line per
/// prime, "p: r1,r2,...".
inline void serialize_system(const ResidueSystem& sys, std::ostream& out) {
  for (const auto& [p, cl] : sys.classes) {
    out << p << ':';
    for (size_t i = 0; i < cl.size(); ++i) out << (i ? "," : " ") << cl[i];
    out << '\n';
  }
}

inline std::string serialize_system(const ResidueSystem& sys) {
  std::ostringstream ss;
  serialize_system(sys, ss);
  return ss.str();
}

/// Parses the text form.  z defaults to just above the largest listed prime
/// unless the caller supplies one.
inline ResidueSystem parse_system(std::istream& in, double z_override = 0) {
  ResidueSystem sys;
  std::string line;
  u32 max_p = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    u32 p = 0;
    char colon = 0;
    if (!(ss >> p >> colon) || colon != ':')
      throw std::invalid_argument("parse_system: malformed line '" + line + "'");
    std::vector<u32> cl;
    u32 v = 0;
    while (ss >> v) {
      cl.push_back(v);
      char comma = 0;
      if (!(ss >> comma)) break;
      if (comma != ',') throw std::invalid_argument("parse_system: malformed line '" + line + "'");
    }
    std::sort(cl.begin(), cl.end());
    sys.classes.emplace_back(p, std::move(cl));
    max_p = std::max(max_p, p);
  }
  std::sort(sys.classes.begin(), sys.classes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  sys.z = z_override > 0 ? z_override : static_cast<double>(max_p) + 1;
  sys.validate();
  return sys;
}

inline ResidueSystem parse_system(const std::string& text, double z_override = 0) {
  std::istringstream ss(text);
  return parse_system(ss, z_override);
}

}  // namespace sievebound
