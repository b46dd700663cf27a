#pragma once

#include <cmath>
#include <optional>

#include "sievebound/config.hpp"
#include "sievebound/integer.hpp"
#include "sievebound/residue.hpp"

namespace sievebound {

/// Large-sieve weight g(p) = rho/(p - rho).  Requires rho < p.
inline double g_weight(u64 p, u64 rho) {
  if (rho >= p) throw std::invalid_argument("g_weight: rho must be < p");
  return static_cast<double>(rho) / static_cast<double>(p - rho);
}

namespace detail {

// Depth-first enumeration of the squarefree d <= T supported on the primes
// of the system, accumulating the multiplicative weight.  Pruning works on
// the running divisor (128-bit, enough for every finite truncation the
// budgets allow); when T exceeds what 128 bits can hold the sum is the full
// product and no pruning is needed.
template <typename Acc>
void g_sum_dfs(const ResidueSystem& sys, double T, u64 node_budget, Acc& acc) {
  constexpr double kU128Max = 3.4e38;
  const bool unbounded = !(T < kU128Max);
  const u128 t128 = unbounded ? u128(0) : static_cast<u128>(T);
  u64 nodes = 0;

  struct Frame {
    size_t idx;
    u128 d;
    typename Acc::Weight w;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 1, acc.unit()});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (++nodes > node_budget)
      throw budget_error("g_sum: node budget exceeded");
    acc.add(f.w);
    for (size_t i = f.idx; i < sys.classes.size(); ++i) {
      const u64 p = sys.classes[i].first;
      const u64 rho = sys.classes[i].second.size();
      if (!unbounded) {
        if (f.d > t128 / p) break;  // primes ascend, so all later ones fail too
      }
      stack.push_back({i + 1, f.d * p, acc.scale(f.w, p, rho)});
    }
  }
}

struct DoubleAcc {
  using Weight = double;
  Kahan sum;
  Weight unit() const { return 1.0; }
  Weight scale(Weight w, u64 p, u64 rho) const { return w * g_weight(p, rho); }
  void add(Weight w) { sum.add(w); }
};

struct RatAcc {
  using Weight = Rat;
  Rat sum = 0;
  Weight unit() const { return Rat(1); }
  Weight scale(const Weight& w, u64 p, u64 rho) const {
    if (rho >= p) throw std::invalid_argument("g_weight: rho must be < p");
    return w * Rat(rho, p - rho);
  }
  void add(const Weight& w) { sum += w; }
};

}  // namespace detail

/// G_z(T): sum of the multiplicative g-weight over squarefree d <= T
/// composed of primes below the system's z.  Exact values are needed for
/// the soundness tests, so this enumerates rather than estimates; the node
/// budget guards the enumeration.
inline double g_sum(const ResidueSystem& sys, double T, u64 node_budget = 1'000'000'000) {
  if (T < 1) throw std::invalid_argument("g_sum: T must be >= 1");
  detail::DoubleAcc acc;
  detail::g_sum_dfs(sys, T, node_budget, acc);
  return acc.sum.value();
}

/// Exact-rational G_z(T), for validating the double-precision rounding on
/// small systems (intended for z <= 100).
inline Rat g_sum_exact(const ResidueSystem& sys, double T, u64 node_budget = 1'000'000'000) {
  if (T < 1) throw std::invalid_argument("g_sum_exact: T must be >= 1");
  detail::RatAcc acc;
  detail::g_sum_dfs(sys, T, node_budget, acc);
  return acc.sum;
}

/// V(P(z)) = prod over p < z of (1 - rho(p)/p).
inline double v_of(const ResidueSystem& sys) {
  double v = 1.0;
  for (const auto& [p, cl] : sys.classes)
    v *= 1.0 - static_cast<double>(cl.size()) / static_cast<double>(p);
  return v;
}

inline Rat v_of_exact(const ResidueSystem& sys) {
  Rat v = 1;
  for (const auto& [p, cl] : sys.classes) v *= Rat(p - cl.size(), p);
  return v;
}

/// B(z) = (1/log z) * sum over p < z of rho(p) log p / p.
/// An empty system (z <= 2) has the empty sum, 0.
inline double b_of(const ResidueSystem& sys) {
  if (sys.classes.empty()) return 0.0;
  Kahan s;
  for (const auto& [p, cl] : sys.classes)
    s.add(static_cast<double>(cl.size()) * std::log(static_cast<double>(p)) / static_cast<double>(p));
  return s.value() / std::log(sys.z);
}

/// psi_1(K, t) = max{0, t log(t/K) - t + K}; the t = 0 limit is K.
inline double psi1(double K, double t) {
  if (!(K > 0)) throw std::invalid_argument("psi1: K must be positive");
  if (t < 0) throw std::invalid_argument("psi1: t must be >= 0");
  if (t == 0) return K;
  return std::max(0.0, t * std::log(t / K) - t + K);
}

/// psi_0(B, v, u) = 1 - exp(-psi_1(B, v/u)), defined for v/u >= B.
/// B = 0 (nothing sifted below z) gives the limit value 1.  Landing on the
/// v/u = B boundary through rounded arithmetic is allowed to within a few
/// ulps; psi_1 is nonnegative either way.
inline double psi0(double B, double v, double u) {
  if (!(u > 0)) throw std::invalid_argument("psi0: u must be positive");
  const double t = v / u;
  if (B == 0.0) return t > 0 ? 1.0 : 0.0;
  if (t < B * (1 - 1e-9)) throw std::invalid_argument("psi0: v/u < B, bound inapplicable");
  // the true value is strictly below 1; keep the float one there too when
  // exp(-psi1) underflows past the last representable gap
  return std::min(1.0 - std::exp(-psi1(B, std::max(t, B))), std::nextafter(1.0, 0.0));
}

/// Upper-bound report for the count of unsifted integers in an interval of
/// length X: bound = (X + w^2)/G(w) with G evaluated over primes p < w.
struct SieveBoundReport {
  double X = 0;
  double w = 0;
  double G_value = 0;
  double bound = 0;
  std::optional<u64> empirical;  // exact sift count, when computed
};

inline SieveBoundReport large_sieve_bound(double X, double w, const ResidueSystem& sys,
                                          u64 node_budget = 1'000'000'000) {
  if (!(w >= 1)) throw std::invalid_argument("large_sieve_bound: w must be >= 1");
  if (w > sys.z)
    throw std::invalid_argument("large_sieve_bound: system must cover primes below w");
  if (X < 0) throw std::invalid_argument("large_sieve_bound: X must be >= 0");
  SieveBoundReport rep;
  rep.X = X;
  rep.w = w;
  rep.G_value = g_sum(sys.restrict_to(w), w, node_budget);
  rep.bound = (X + w * w) / rep.G_value;
  return rep;
}

/// Lower bound psi_0(B(z), v, u) / V(P(z)) for G_z(x^{1/u}), valid when
/// v = log x / log z >= u B(z).  Callers may check it against g_sum.
inline double g_lower_bound(const ResidueSystem& sys, double x, double u) {
  if (!(sys.z >= 2)) throw std::invalid_argument("g_lower_bound: z must be >= 2");
  if (!(x > 1)) throw std::invalid_argument("g_lower_bound: x must exceed 1");
  const double v = std::log(x) / std::log(sys.z);
  const double B = b_of(sys);
  if (v < u * B * (1 - 1e-9))
    throw std::invalid_argument("g_lower_bound: v < u*B(z), hypothesis violated");
  return psi0(B, v, u) / v_of(sys);
}

}  // namespace sievebound
