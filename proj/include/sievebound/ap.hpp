#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sievebound/config.hpp"
#include "sievebound/integer.hpp"
#include "sievebound/primes.hpp"

namespace sievebound {

/// Published error constants the bound chain consumes.  The inequalities
/// they come from live at x >= exp(exp(13.3)) and are not desk-verifiable;
/// they are carried as named values and the reachable-range behaviour is
/// reported through psi_error_ratio instead.
struct APErrorConstants {
  double psi_error_coeff = 0.2785;     // |psi(x;k,a) - x/phi(k)| <= this * x/(phi(k) log x)
  double theta_error_coeff = 0.279;    // same shape for theta, log^2 denominator
  double logsum_tail_coeff = 1.0016;   // log z + this * log x0 bounds the log-sum
  double bt_integral_coeff = 2.0015;   // Brun-Titchmarsh integral, * log x0 / phi(k)
  double mertens_tail_coeff = 0.7;     // exp(this / (phi(k) log^2 x0)) product slack
  double x0_ln_ln = 13.3;              // validity threshold x0 = exp(exp(13.3))
};

namespace detail {

inline void require_coprime_class(u64 k, u64 a, const char* who) {
  if (k < 1) throw std::invalid_argument(std::string(who) + ": k must be >= 1");
  if (std::gcd(a % k, k) != 1)
    throw std::invalid_argument(std::string(who) + ": gcd(a,k) must be 1");
}

}  // namespace detail

/// theta(x; k, a) = sum of log p over primes p <= x with p == a (mod k).
inline double chebyshev_theta(double x, u64 k, u64 a) {
  detail::require_coprime_class(k, a, "chebyshev_theta");
  if (x < 2) return 0.0;
  Kahan s;
  const u64 limit = static_cast<u64>(x);
  for_each_prime(limit, [&](u64 p) {
    if (p % k == a % k) s.add(std::log(static_cast<double>(p)));
  });
  return s.value();
}

/// psi(x; k, a) = sum of Lambda(n) over n <= x with n == a (mod k);
/// the prime powers are enumerated exactly.
inline double chebyshev_psi(double x, u64 k, u64 a) {
  detail::require_coprime_class(k, a, "chebyshev_psi");
  if (x < 2) return 0.0;
  Kahan s;
  const u64 limit = static_cast<u64>(x);
  for_each_prime(limit, [&](u64 p) {
    const double lp = std::log(static_cast<double>(p));
    for (u64 pm = p;; ) {
      if (pm % k == a % k) s.add(lp);
      if (pm > limit / p) break;
      pm *= p;
    }
  });
  return s.value();
}

/// Sum of log p / p over w < p <= z with p == a (mod k).  w = 0 starts the
/// sum at the first prime.
inline double logp_over_p_sum(double w, double z, u64 k, u64 a) {
  detail::require_coprime_class(k, a, "logp_over_p_sum");
  if (!(w <= z)) throw std::invalid_argument("logp_over_p_sum: need w <= z");
  if (z < 2) return 0.0;
  Kahan s;
  for_each_prime(static_cast<u64>(z), [&](u64 p) {
    const double pd = static_cast<double>(p);
    if (pd > w && p % k == a % k) s.add(std::log(pd) / pd);
  });
  return s.value();
}

/// Product of (1 - 1/p) over w <= p < z with p == a (mod k).
inline double mertens_ap_product(double w, double z, u64 k, u64 a) {
  detail::require_coprime_class(k, a, "mertens_ap_product");
  if (!(w <= z)) throw std::invalid_argument("mertens_ap_product: need w <= z");
  double prod = 1.0;
  if (z <= 2) return prod;
  for_each_prime(static_cast<u64>(std::ceil(z)), [&](u64 p) {
    const double pd = static_cast<double>(p);
    if (pd >= w && pd < z && p % k == a % k) prod *= 1.0 - 1.0 / pd;
  });
  return prod;
}

/// Both sides of the partial-summation identity
///   sum_{w<p<=z} log p / p
///     = theta(z)/z - theta(w)/w + integral_w^z theta(t)/t^2 dt
/// with the integral evaluated exactly as a finite sum over the steps of
/// theta(t; k, a).  Exactness of the step integration makes the comparison
/// a pure floating-point-noise test.
struct PartialSummationCheck {
  double lhs = 0;
  double rhs = 0;
};

inline PartialSummationCheck partial_summation_check(double w, double z, u64 k, u64 a) {
  detail::require_coprime_class(k, a, "partial_summation_check");
  if (!(2 <= w && w < z)) throw std::invalid_argument("partial_summation_check: need 2 <= w < z");
  std::vector<u64> class_primes;
  for_each_prime(static_cast<u64>(z), [&](u64 p) {
    if (p % k == a % k) class_primes.push_back(p);
  });

  Kahan lhs;
  double theta_w = 0;
  for (u64 p : class_primes) {
    const double pd = static_cast<double>(p);
    if (pd <= w) theta_w += std::log(pd);
    else lhs.add(std::log(pd) / pd);
  }

  double theta = theta_w;
  double t_prev = w;
  Kahan integral;
  for (u64 p : class_primes) {
    const double pd = static_cast<double>(p);
    if (pd <= w) continue;
    integral.add(theta * (1.0 / t_prev - 1.0 / pd));
    theta += std::log(pd);
    t_prev = pd;
  }
  integral.add(theta * (1.0 / t_prev - 1.0 / z));
  const double theta_z = theta;

  PartialSummationCheck out;
  out.lhs = lhs.value();
  out.rhs = theta_z / z - theta_w / w + integral.value();
  return out;
}

/// One audited inequality: its worst relative margin over the sample grid
/// and where it occurred.  margin = (bound - value)/bound, negative means a
/// violation.
struct AuditMargin {
  double margin = std::numeric_limits<double>::infinity();
  double at_t = 0;
  u64 at_k = 0;
  u64 at_a = 0;

  void update(double m, double t, u64 k = 0, u64 a = 0) {
    if (m < margin) {
      margin = m;
      at_t = t;
      at_k = k;
      at_a = a;
    }
  }
};

struct ClassicalAuditReport {
  bool pass = true;
  u64 limit = 0;
  u64 sample_points = 0;
  AuditMargin logp_sum;          // sum_{p<=t} log p / p < log t
  AuditMargin mertens;           // prod_{p<t} (1-1/p) < e^-gamma (1+1/(2 log^2 t))/log t
  AuditMargin brun_titchmarsh;   // pi(t;k,a) <= 2t/(phi(k) log(t/k)), t > 2k
  double max_psi_error_ratio = 0;  // |psi(t;k,a)-t/phi(k)| phi(k) log t / t, k <= log t
  double psi_ratio_at_t = 0;
  u64 psi_ratio_at_k = 0;
  u64 psi_ratio_at_a = 0;
  std::vector<std::string> failures;
};

/// Desk-scale audit of the classical inequalities the progression estimates
/// lean on, sampled on the grid {2^j} union {10^j} (plus the limit itself).
inline ClassicalAuditReport classical_audit(u64 limit, u64 kmax = 100,
                                            const Budgets& budgets = {}) {
  if (limit < 2) throw std::invalid_argument("classical_audit: limit must be >= 2");
  if (limit > budgets.audit_limit)
    throw budget_error("classical_audit: limit exceeds audit_limit budget");

  std::vector<u64> grid;
  for (u64 t = 2; t <= limit; t *= 2) grid.push_back(t);
  for (u64 t = 10; t <= limit; t *= 10) grid.push_back(t);
  grid.push_back(limit);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // phi(k) for k <= kmax
  std::vector<u64> phi(kmax + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (u64 p = 2; p <= kmax; ++p) {
    if (phi[p] == p) {  // p prime
      for (u64 m = p; m <= kmax; m += p) phi[m] -= phi[m] / p;
    }
  }

  // per-class state, k <= kmax
  std::vector<std::vector<u64>> pi_counts(kmax + 1);
  std::vector<std::vector<double>> psi_sums(kmax + 1);
  for (u64 k = 1; k <= kmax; ++k) {
    pi_counts[k].assign(k, 0);
    psi_sums[k].assign(k, 0.0);
  }

  // events: primes (counted in everything) and higher prime powers (psi only)
  std::vector<u64> primes;
  for_each_prime(limit, [&](u64 p) { primes.push_back(p); });
  struct Power {
    u64 n;
    double logp;
  };
  std::vector<Power> powers;
  for (u64 p : primes) {
    if (p > limit / p) break;
    const double lp = std::log(static_cast<double>(p));
    for (u64 pm = p * p;; pm *= p) {
      powers.push_back({pm, lp});
      if (pm > limit / p) break;
    }
  }
  std::sort(powers.begin(), powers.end(), [](const Power& a, const Power& b) { return a.n < b.n; });

  ClassicalAuditReport rep;
  rep.limit = limit;
  const double inv_e_gamma = std::exp(-kEulerGamma);

  Kahan logp_over_p;
  double mertens_prod = 1.0;

  auto add_event = [&](u64 n, double logp, bool prime_event) {
    for (u64 k = 2; k <= kmax; ++k) {
      const u64 a = n % k;
      psi_sums[k][a] += logp;
      if (prime_event) pi_counts[k][a] += 1;
    }
    psi_sums[1][0] += logp;
    if (prime_event) {
      pi_counts[1][0] += 1;
      const double pd = static_cast<double>(n);
      logp_over_p.add(logp / pd);
    }
  };

  auto finalize = [&](u64 t, double mertens_strict) {
    ++rep.sample_points;
    const double td = static_cast<double>(t);
    const double lt = std::log(td);

    const double m1 = (lt - logp_over_p.value()) / lt;
    rep.logp_sum.update(m1, td);
    if (m1 < 0)
      rep.failures.push_back("logp_sum violated at t=" + std::to_string(t));

    const double rhs2 = inv_e_gamma * (1.0 + 1.0 / (2.0 * lt * lt)) / lt;
    const double m2 = (rhs2 - mertens_strict) / rhs2;
    rep.mertens.update(m2, td);
    if (m2 < 0)
      rep.failures.push_back("mertens violated at t=" + std::to_string(t));

    for (u64 k = 2; k <= kmax; ++k) {
      if (t <= 2 * k) continue;
      const double bt_denom = static_cast<double>(phi[k]) * std::log(td / static_cast<double>(k));
      for (u64 a = 0; a < k; ++a) {
        if (std::gcd(a, k) != 1) continue;
        const double rhs3 = 2.0 * td / bt_denom;
        const double m3 = (rhs3 - static_cast<double>(pi_counts[k][a])) / rhs3;
        rep.brun_titchmarsh.update(m3, td, k, a);
        if (m3 < 0)
          rep.failures.push_back("brun_titchmarsh violated at t=" + std::to_string(t) +
                                 " k=" + std::to_string(k) + " a=" + std::to_string(a));
      }
    }

    // deviation ratio of psi from its main term, inside the k <= log t range
    for (u64 k = 1; k <= kmax && static_cast<double>(k) <= lt; ++k) {
      for (u64 a = 0; a < k; ++a) {
        if (std::gcd(a, k) != 1) continue;
        const double dev = std::abs(psi_sums[k][a] - td / static_cast<double>(phi[k]));
        const double ratio = dev * static_cast<double>(phi[k]) * lt / td;
        if (ratio > rep.max_psi_error_ratio) {
          rep.max_psi_error_ratio = ratio;
          rep.psi_ratio_at_t = td;
          rep.psi_ratio_at_k = k;
          rep.psi_ratio_at_a = a;
        }
      }
    }
  };

  size_t pi_idx = 0, pw_idx = 0;
  for (u64 t : grid) {
    // events strictly below t
    while (true) {
      const u64 next_p = pi_idx < primes.size() ? primes[pi_idx] : ~0ull;
      const u64 next_w = pw_idx < powers.size() ? powers[pw_idx].n : ~0ull;
      const u64 n = std::min(next_p, next_w);
      if (n >= t) break;
      if (next_p <= next_w) {
        add_event(n, std::log(static_cast<double>(n)), true);
        mertens_prod *= 1.0 - 1.0 / static_cast<double>(n);
        ++pi_idx;
      } else {
        add_event(n, powers[pw_idx].logp, false);
        ++pw_idx;
      }
    }
    // the strict-product side of the sample sees only primes < t
    const double mertens_strict = mertens_prod;
    // events equal to t join the inclusive sums before the checks
    while (pi_idx < primes.size() && primes[pi_idx] == t) {
      add_event(t, std::log(static_cast<double>(t)), true);
      mertens_prod *= 1.0 - 1.0 / static_cast<double>(t);
      ++pi_idx;
    }
    while (pw_idx < powers.size() && powers[pw_idx].n == t) {
      add_event(t, powers[pw_idx].logp, false);
      ++pw_idx;
    }
    finalize(t, mertens_strict);
  }

  rep.pass = rep.failures.empty();
  return rep;
}

/// One progression's statistics at a point, plus the deviation ratio of psi
/// from x/phi(k) scaled the way the error-term estimates are stated.
struct APStatistics {
  double x = 0;
  u64 k = 1;
  u64 a = 0;
  double theta = 0;
  double psi = 0;
  double logp_over_p = 0;    // over p <= x
  double mertens_product = 0;  // over 2 <= p < x
  double psi_error_ratio = 0;
};

inline APStatistics ap_stats(double x, u64 k, u64 a) {
  detail::require_coprime_class(k, a, "ap_stats");
  if (x < 2) throw std::invalid_argument("ap_stats: x must be >= 2");
  APStatistics st;
  st.x = x;
  st.k = k;
  st.a = a % k;
  st.theta = chebyshev_theta(x, k, a);
  st.psi = chebyshev_psi(x, k, a);
  st.logp_over_p = logp_over_p_sum(0, x, k, a);
  st.mertens_product = mertens_ap_product(2, x, k, a);
  u64 phi = 0;
  for (u64 r = 1; r < k; ++r)
    if (std::gcd(r, k) == 1) ++phi;
  if (k == 1) phi = 1;
  st.psi_error_ratio = std::abs(st.psi - x / static_cast<double>(phi)) *
                       static_cast<double>(phi) * std::log(x) / x;
  return st;
}

}  // namespace sievebound
