#pragma once

#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sievebound/bounds.hpp"
#include "sievebound/config.hpp"
#include "sievebound/factor.hpp"
#include "sievebound/integer.hpp"
#include "sievebound/sigma_table.hpp"

namespace sievebound {

/// Resumable scan checkpointing: one line per completed segment,
/// "[start,end) checksum".  Single writer; readers load once at startup.
class ScanLedger {
 public:
  explicit ScanLedger(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      unsigned long long start = 0, end = 0;
      char csum[32] = {0};
      if (std::sscanf(line.c_str(), "[%llu,%llu) %31s", &start, &end, csum) >= 2)
        done_.insert({start, end});
    }
  }

  bool completed(u64 start, u64 end) const { return done_.count({start, end}) > 0; }

  void record(u64 start, u64 end, u64 checksum) {
    done_.insert({start, end});
    std::ofstream out(path_, std::ios::app);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "[%llu,%llu) %016llx\n",
                  static_cast<unsigned long long>(start),
                  static_cast<unsigned long long>(end),
                  static_cast<unsigned long long>(checksum));
    out << buf;
    out.flush();
  }

 private:
  std::string path_;
  std::set<std::pair<u64, u64>> done_;
};

namespace detail {

inline u64 segment_checksum(u64 start, u64 end, const std::vector<u64>& hits) {
  std::string blob = std::to_string(start) + ":" + std::to_string(end) + ":";
  for (u64 h : hits) blob += std::to_string(h) + ",";
  return fnv1a64(blob);
}

}  // namespace detail

/// Quasiperfect test data for one N: is it an odd square, and do the prime
/// factors of sigma(N) all fall in the classes 1, 3 mod 8?  (The class set
/// {1,3} is multiplicatively closed mod 8, so checking prime factors is
/// equivalent to checking every divisor.)
struct CattaneoFilter {
  bool odd_square = false;
  bool residues_ok = false;
};

inline CattaneoFilter cattaneo_filter(const Int& N) {
  if (N < 1) throw std::invalid_argument("cattaneo_filter: N must be >= 1");
  CattaneoFilter out;
  out.odd_square = boost::multiprecision::bit_test(N, 0) && is_perfect_square(N);
  const Int s = sigma_of(N);
  out.residues_ok = true;
  for (const auto& [p, e] : factorize(s).entries) {
    const unsigned r = static_cast<unsigned>(Int(p % 8).convert_to<u32>());
    if (r != 1 && r != 3) {
      out.residues_ok = false;
      break;
    }
  }
  return out;
}

struct QuasiperfectScan {
  std::vector<u64> hits;
  u64 spot_samples = 0;
  bool spot_consistent = true;  // spot checks found nothing the scan missed
};

struct QuasiperfectOptions {
  bool full_range = false;  // scan every n via sigma segments instead
  u64 spot_samples = 1'000'000;
  u64 seed = 1;
};

/// All N <= limit with sigma(N) = 2N + 1.  The default mode enumerates odd
/// squares only (every quasiperfect number is one) and cross-checks that
/// shortcut with random spot evaluations over the full range; the slow full
/// mode scans every n through sigma segments.
inline QuasiperfectScan quasiperfect_scan(u64 limit, const QuasiperfectOptions& opt = {},
                                          const Budgets& budgets = {},
                                          ScanLedger* ledger = nullptr) {
  if (limit < 1) throw std::invalid_argument("quasiperfect_scan: limit must be >= 1");
  if (limit > budgets.scan_limit)
    throw budget_error("quasiperfect_scan: limit exceeds scan_limit budget");
  QuasiperfectScan out;

  if (opt.full_range) {
    for_each_sigma_segment(limit, budgets.scan_segment, [&](u64 start, std::span<const u64> sig) {
      const u64 end = start + sig.size();
      if (ledger && ledger->completed(start, end)) return;
      std::vector<u64> seg_hits;
      for (u64 i = 0; i < sig.size(); ++i) {
        const u64 n = start + i;
        if (sig[i] == 2 * n + 1) seg_hits.push_back(n);
      }
      if (ledger) ledger->record(start, end, detail::segment_checksum(start, end, seg_hits));
      out.hits.insert(out.hits.end(), seg_hits.begin(), seg_hits.end());
    });
    return out;
  }

  for (u64 m = 1; m * m <= limit; m += 2) {
    Factorization f = factorize(Int(m));
    for (auto& [p, e] : f.entries) e *= 2;  // factorization of m^2
    if (sigma(f) == 2 * Int(m) * m + 1) out.hits.push_back(m * m);
  }

  if (opt.spot_samples > 0 && limit >= 2) {
    std::mt19937_64 rng(opt.seed);
    // modulo reduction keeps the sample sequence identical across standard
    // libraries; the tiny bias is irrelevant for a consistency probe
    for (u64 i = 0; i < opt.spot_samples; ++i) {
      const u64 n = 1 + rng() % limit;
      ++out.spot_samples;
      if (sigma_of(n) == 2 * Int(n) + 1) {
        if (!std::binary_search(out.hits.begin(), out.hits.end(), n)) out.spot_consistent = false;
      }
    }
  }
  return out;
}

/// All N <= limit with sigma(N)/N equal to the target ratio exactly.
inline std::vector<u64> multiperfect_scan(u64 limit, const Rat& target,
                                          const Budgets& budgets = {},
                                          ScanLedger* ledger = nullptr) {
  if (limit < 1) throw std::invalid_argument("multiperfect_scan: limit must be >= 1");
  if (limit > budgets.scan_limit)
    throw budget_error("multiperfect_scan: limit exceeds scan_limit budget");
  if (!(target > 1)) throw std::invalid_argument("multiperfect_scan: target must exceed 1");
  const Int num_i = boost::multiprecision::numerator(target);
  const Int den_i = boost::multiprecision::denominator(target);
  const bool fits = num_i <= std::numeric_limits<u64>::max() && den_i <= std::numeric_limits<u64>::max();
  const u64 num = fits ? num_i.convert_to<u64>() : 0;
  const u64 den = fits ? den_i.convert_to<u64>() : 0;

  std::vector<u64> hits;
  for_each_sigma_segment(limit, budgets.scan_segment, [&](u64 start, std::span<const u64> sig) {
    const u64 end = start + sig.size();
    if (ledger && ledger->completed(start, end)) return;
    std::vector<u64> seg_hits;
    for (u64 i = 0; i < sig.size(); ++i) {
      const u64 n = start + i;
      if (fits) {
        if (u128(den) * sig[i] == u128(num) * n) seg_hits.push_back(n);
      } else if (Rat(Int(sig[i]), Int(n)) == target) {
        seg_hits.push_back(n);
      }
    }
    if (ledger) ledger->record(start, end, detail::segment_checksum(start, end, seg_hits));
    hits.insert(hits.end(), seg_hits.begin(), seg_hits.end());
  });
  return hits;
}

struct AmicableReport {
  bool equation_holds = false;  // sigma(m) = sigma(n) = m + n
  bool perfect_pair = false;    // m = n, so the equation says "m is perfect"
  bool amicable = false;        // equation holds with m != n
};

inline AmicableReport amicable_report(const Int& m, const Int& n) {
  if (m < 1 || n < 1) throw std::invalid_argument("amicable_report: m, n must be >= 1");
  AmicableReport rep;
  const Int sum = m + n;
  rep.equation_holds = sigma_of(m) == sum && sigma_of(n) == sum;
  rep.perfect_pair = rep.equation_holds && m == n;
  rep.amicable = rep.equation_holds && m != n;
  return rep;
}

/// True iff sigma(m) = sigma(n) = m + n with m != n; the m = n degenerate
/// case is "perfect, not amicable" and reports false here.
inline bool amicable_check(const Int& m, const Int& n) {
  return amicable_report(m, n).amicable;
}

struct KishoreReport {
  bool parity_ok = false;     // m even, n odd
  bool coprime = false;
  bool equation_holds = false;  // sigma(m) sigma(n) = (m+n)^2
  bool form_ok = false;         // m = 2A^2 and n = B^2
  bool passes = false;          // all of the above
  Int N = 0;                    // mn/2 when passes
  bool h_exceeds_2 = false;     // (m+n)^2 / (2mn) > 2
  bool three_divides_sigma = false;  // 3 | sigma(m) sigma(n), needed for the /3 step
  bool sigma_residues_ok = false;    // sigma(m)sigma(n)/3 free of factors 5,7 mod 8
};

inline KishoreReport kishore_check(const Int& m, const Int& n) {
  if (m < 1 || n < 1) throw std::invalid_argument("kishore_check: m, n must be >= 1");
  KishoreReport rep;
  rep.parity_ok = !boost::multiprecision::bit_test(m, 0) && boost::multiprecision::bit_test(n, 0);
  if (!rep.parity_ok) return rep;
  rep.coprime = boost::multiprecision::gcd(m, n) == 1;
  if (!rep.coprime) return rep;
  const Int sm = sigma_of(m), sn = sigma_of(n);
  rep.equation_holds = sm * sn == (m + n) * (m + n);
  if (!rep.equation_holds) return rep;
  rep.form_ok = is_perfect_square(m / 2) && is_perfect_square(n);
  if (!rep.form_ok) return rep;
  rep.passes = true;
  rep.N = m * n / 2;
  rep.h_exceeds_2 = (m + n) * (m + n) > 4 * m * n;
  const Int prod = sm * sn;
  rep.three_divides_sigma = prod % 3 == 0;
  const Int reduced = rep.three_divides_sigma ? prod / 3 : prod;
  rep.sigma_residues_ok = true;
  for (const auto& [p, e] : factorize(reduced).entries) {
    const unsigned r = static_cast<unsigned>(Int(p % 8).convert_to<u32>());
    if (r == 5 || r == 7) {
      rep.sigma_residues_ok = false;
      break;
    }
  }
  return rep;
}

/// Exhaustive search for pairs (m even, n odd) with m, n <= limit,
/// gcd(m,n) = 1 and sigma(m) sigma(n) = (m+n)^2.  Driven by the sum
/// q = m + n: sigma(m) must divide q^2, so candidates come from the
/// divisors of q^2 through a sigma-preimage index.
inline std::vector<std::pair<u64, u64>> kishore_search(u64 limit, const Budgets& budgets = {},
                                                       ScanLedger* ledger = nullptr) {
  if (limit < 3) return {};
  if (limit > budgets.sigma_table_entries)
    throw budget_error("kishore_search: limit exceeds sigma_table_entries budget");
  const SigmaTable table = sigma_table(limit, budgets);

  // sigma-value index over even m
  std::vector<std::pair<u64, u64>> by_sigma;  // (sigma(m), m), m even
  by_sigma.reserve(limit / 2);
  for (u64 m = 2; m <= limit; m += 2) by_sigma.emplace_back(table.at(m), m);
  std::sort(by_sigma.begin(), by_sigma.end());
  const u64 max_even_sigma = by_sigma.empty() ? 0 : by_sigma.back().first;

  // smallest-prime-factor table for factoring q quickly
  const u64 qmax = 2 * limit;
  std::vector<u32> spf(qmax + 1, 0);
  for (u64 i = 2; i <= qmax; ++i) {
    if (spf[i] == 0)
      for (u64 j = i; j <= qmax; j += i)
        if (spf[j] == 0) spf[j] = static_cast<u32>(i);
  }

  std::vector<std::pair<u64, u64>> hits;
  const u64 seg = std::max<u64>(budgets.scan_segment, 4096);
  std::vector<u64> divisors;
  for (u64 seg_lo = 3; seg_lo <= qmax; seg_lo += seg) {
    const u64 seg_hi = std::min(qmax, seg_lo + seg - 1);
    if (ledger && ledger->completed(seg_lo, seg_hi + 1)) continue;
    std::vector<u64> seg_flat;
    for (u64 q = seg_lo | 1; q <= seg_hi; q += 2) {  // q = m + n must be odd
      // factor q, double exponents, enumerate divisors of q^2
      divisors.assign(1, 1);
      u64 rest = q;
      while (rest > 1) {
        const u64 p = spf[rest];
        unsigned e = 0;
        while (rest % p == 0) rest /= p, ++e;
        const size_t base = divisors.size();
        u64 pk = 1;
        for (unsigned i = 0; i < 2 * e; ++i) {
          pk *= p;
          for (size_t j = 0; j < base; ++j) {
            const u128 d = u128(divisors[j]) * pk;
            if (d <= max_even_sigma) divisors.push_back(static_cast<u64>(d));
          }
        }
      }
      const u128 q2 = u128(q) * q;
      for (u64 D : divisors) {
        if (q2 % D != 0) continue;  // cannot happen; cheap safety
        const u128 need = q2 / D;
        auto it = std::lower_bound(by_sigma.begin(), by_sigma.end(), std::make_pair(D, u64(0)));
        for (; it != by_sigma.end() && it->first == D; ++it) {
          const u64 m = it->second;
          if (m >= q) break;  // by_sigma pairs with equal sigma are m-sorted
          const u64 n = q - m;
          if (n > limit) continue;
          if (table.at(n) != need) continue;
          if (std::gcd(m, n) != 1) continue;
          hits.emplace_back(m, n);
          seg_flat.push_back(m);
          seg_flat.push_back(n);
        }
      }
    }
    if (ledger) ledger->record(seg_lo, seg_hi + 1, detail::segment_checksum(seg_lo, seg_hi + 1, seg_flat));
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

/// Which primes of a factorization violate the exponent-pattern condition:
/// e + 1 (the squared form stores e = 2 beta, so e + 1 = 2 beta + 1) must be
/// divisible by some member of the prime set.
struct PatternReport {
  std::vector<Int> unconstrained;
  u64 s_min = 0;
  bool form_violated = false;  // squared form requested but an exponent was odd
};

inline PatternReport pattern_classify(const Factorization& f, const PrimeBasis& basis,
                                      bool squared) {
  PatternReport rep;
  if (squared) {
    for (const auto& [p, e] : f.entries) {
      if (e % 2 != 0) rep.form_violated = true;
    }
    if (rep.form_violated) {
      for (const auto& [p, e] : f.entries) rep.unconstrained.push_back(p);
      rep.s_min = rep.unconstrained.size();
      return rep;
    }
  }
  for (const auto& [p, e] : f.entries) {
    bool constrained = false;
    for (u64 l : basis.primes) {
      if ((e + 1) % l == 0) {
        constrained = true;
        break;
      }
    }
    if (!constrained) rep.unconstrained.push_back(p);
  }
  rep.s_min = rep.unconstrained.size();
  return rep;
}

/// The four hypotheses of the squared-form bound, checked on a concrete N,
/// plus the bound comparison itself (smallest prime factor against C1)
/// carried out through LogValue.
struct Thm4Report {
  bool odd_square_exponents = false;  // N odd, every exponent even
  bool pattern_ok = false;            // every 2b+1 divisible by a set member
  bool abundancy_ge_2 = false;
  bool sigma_residues_ok = false;  // sigma(N) free of factors 5, 7 mod 8
  bool all_hold = false;
  Int smallest_prime = 0;
  bool spf_below_c1 = false;
};

inline Thm4Report thm4_hypothesis_check(const Factorization& f, const PrimeBasis& basis) {
  Thm4Report rep;
  bool odd = true, even_exps = true;
  for (const auto& [p, e] : f.entries) {
    if (p == 2) odd = false;
    if (e % 2 != 0) even_exps = false;
  }
  rep.odd_square_exponents = odd && even_exps && !f.entries.empty();
  const PatternReport pat = pattern_classify(f, basis, true);
  rep.pattern_ok = !pat.form_violated && pat.s_min == 0 && !f.entries.empty();
  rep.abundancy_ge_2 = abundancy(f) >= 2;
  rep.sigma_residues_ok = true;
  for (const auto& [p, e] : factorize(sigma(f)).entries) {
    const unsigned r = static_cast<unsigned>(Int(p % 8).convert_to<u32>());
    if (r == 5 || r == 7) {
      rep.sigma_residues_ok = false;
      break;
    }
  }
  rep.all_hold = rep.odd_square_exponents && rep.pattern_ok && rep.abundancy_ge_2 &&
                 rep.sigma_residues_ok;
  if (rep.all_hold && !basis.empty()) {
    rep.smallest_prime = f.entries.front().first;
    rep.spf_below_c1 = LogValue::from_int(rep.smallest_prime) < c_one(basis).c1;
  }
  return rep;
}

}  // namespace sievebound
