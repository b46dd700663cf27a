#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sievebound/basis.hpp"
#include "sievebound/factor.hpp"
#include "sievebound/integer.hpp"
#include "sievebound/logvalue.hpp"
#include "sievebound/sieve_bounds.hpp"

namespace sievebound {

/// The explicit constants threaded through the smallest-prime-factor bound:
/// defaults are the published chain values.  b2 and b3 are carried halved,
/// exactly as they arise before the final doubling.
struct ConstantChain {
  double b0 = 2.01;
  double b1_ln_factor = 0.1 + 1e-8 - kEulerGamma;  // B1 = e^[this] * log x1
  double a4_ln_factor = 0.1 + 1e-9 - kEulerGamma;  // A4 = e^[this]; note the
                                                   // different tiny offset, carried verbatim
  double b2 = 17.62196 / 2;                        // 8.81098
  double b3 = 129.5214 / 2;                        // 64.7607
  double u = 2 + 1e-7;
  double v = 8.35;
};

// The companion chain used for the squared-form bound.
struct SquaredFormChain {
  double b = 1.505;
  double u = 2.000007;
  double v = 7.538;
  double v_coeff = 0.56146;        // e^-gamma rounded up with the tail slack
  double s_bound = 16.65708;       // sieve-count coefficient before the +x^(1/u) bump
  double pi_bound = 16.65709;      // after absorbing x^(1/u)
  double product_bound = 33.31418;  // 2 * pi_bound
  double exponent = 2310;           // C1 = x3^(2310 |P|^2)
};

inline u64 s_zero(u64 s, const Int& n, const PrimeBasis& basis) {
  if (n < 1) throw std::invalid_argument("s_zero: n must be >= 1");
  const OmegaCounts c = omega_counts(factorize(n), basis);
  return s + c.distinct + c.in_basis;
}

struct X1Result {
  LogValue x1;
  std::string branch;  // which of the four candidates attained the max
};

/// x1 = max{exp P, exp(101 l), exp(exp 18), 10 s0 (l-1) + 1}, reported via
/// its logarithm: ln x1 = max{P, 101 l, e^18, ln(10 s0 (l-1) + 1)}.
inline X1Result x_one(u64 s0, u64 l, const PrimeBasis& basis) {
  if (!basis.contains(l)) throw std::invalid_argument("x_one: l must belong to the basis");
  const double cand_p = to_double_checked(basis.product, "x_one: P");
  const double cand_l = 101.0 * static_cast<double>(l);
  const double cand_e = std::exp(18.0);
  const double cand_s = std::log(10.0 * static_cast<double>(s0) * static_cast<double>(l - 1) + 1.0);
  X1Result r{LogValue::from_ln(cand_p), "exp_P"};
  if (cand_l > r.x1.ln) r = {LogValue::from_ln(cand_l), "exp_101l"};
  if (cand_e > r.x1.ln) r = {LogValue::from_ln(cand_e), "exp_exp_18"};
  if (cand_s > r.x1.ln) r = {LogValue::from_ln(cand_s), "linear_s0"};
  return r;
}

struct LResult {
  double x = 0;
  bool clamped = false;  // no root with x >= e^2 existed; clamped there
  u64 omega = 0;
};

/// L(eps, n): the solution of Omega(n) = eps x / log^2 x on the increasing
/// branch x >= e^2, by bisection to relative tolerance 1e-12.  Below the
/// branch minimum Omega(n)/eps = e^2/4 there is no root and the value is
/// clamped to e^2.
inline LResult l_value(double eps, const Int& n) {
  if (n < 2) throw std::invalid_argument("l_value: n must be >= 2");
  if (!(eps > 0)) throw std::invalid_argument("l_value: eps must be positive");
  LResult r;
  r.omega = omega_counts(factorize(n), PrimeBasis{}).with_multiplicity;
  const double target = static_cast<double>(r.omega) / eps;
  const double e2 = std::exp(2.0);
  auto f = [](double x) { const double lx = std::log(x); return x / (lx * lx); };
  if (target <= e2 / 4) {
    r.x = e2;
    r.clamped = target < e2 / 4;
    return r;
  }
  double lo = e2, hi = e2;
  while (f(hi) < target) hi *= 2;
  for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  r.x = 0.5 * (lo + hi);
  return r;
}

/// Inputs of the multiperfect-form bound: h(N) target n/d in lowest terms
/// with n/d > 1, the count s of unconstrained exponents, the prime set, and
/// the free parameter eps.
struct Theorem1Inputs {
  Int n = 2;
  Int d = 1;
  u64 s = 1;
  PrimeBasis basis;
  double eps = 1.0;

  void validate() const {
    if (d < 1 || n < 1) throw std::invalid_argument("inputs: n, d must be positive");
    if (boost::multiprecision::gcd(n, d) != 1)
      throw std::invalid_argument("inputs: n/d must be in lowest terms");
    if (n <= d) throw std::invalid_argument("inputs: n/d must exceed 1 (bound is vacuous)");
    if (basis.empty()) throw std::invalid_argument("inputs: prime set must be nonempty");
    if (!(eps > 0)) throw std::invalid_argument("inputs: eps must be positive");
  }
};

struct CZeroPerL {
  u64 l = 0;
  double ln_x1 = 0;
  std::string x1_branch;
  double exp_term_ln = 0;  // the main exponential candidate for this l
  double x1_pow_ln = 0;    // ln of x1^8.35
};

struct CZeroResult {
  LogValue c0{0};
  std::string branch;  // two_d1_s | x1_power | L_eps | exp_term
  u64 branch_l = 0;    // the l attaining the max, when applicable
  std::vector<CZeroPerL> per_l;
  LResult L;
  bool p_below_21 = false;  // outside the stated working assumption P >= 21
};

/// ln C0 = max over the candidate magnitudes 2(d+1)s, x1(l)^8.35, L(eps,n)
/// and exp((17.62196 phi(P) + 129.5214 (l-1)) |P| ln x1 / ((l-1) ln(n/d))).
inline CZeroResult c_zero(const Theorem1Inputs& in, const ConstantChain& chain = {}) {
  in.validate();
  CZeroResult res;
  res.p_below_21 = in.basis.product < 21;
  const double ln_ratio = ln_of(in.n) - ln_of(in.d);
  const double phi_p = to_double_checked(in.basis.phi, "c_zero: phi(P)");
  const double set_size = static_cast<double>(in.basis.size());

  double best = -std::numeric_limits<double>::infinity();
  std::string branch;
  u64 branch_l = 0;

  if (in.s >= 1) {
    const double cand = ln_of(Int(2 * (in.d + 1) * in.s));
    if (cand > best) {
      best = cand;
      branch = "two_d1_s";
    }
  }
  res.L = l_value(in.eps, in.n);  // validate() guarantees n >= 2
  {
    const double cand = std::log(res.L.x);
    if (cand > best) {
      best = cand;
      branch = "L_eps";
    }
  }
  for (u64 l : in.basis.primes) {
    const u64 s0 = s_zero(in.s, in.n, in.basis);
    const X1Result x1 = x_one(s0, l, in.basis);
    CZeroPerL row;
    row.l = l;
    row.ln_x1 = x1.x1.ln;
    row.x1_branch = x1.branch;
    row.x1_pow_ln = chain.v * x1.x1.ln;
    row.exp_term_ln = (2 * chain.b2 * phi_p + 2 * chain.b3 * static_cast<double>(l - 1)) *
                      set_size * x1.x1.ln /
                      (static_cast<double>(l - 1) * ln_ratio);
    res.per_l.push_back(row);
    if (row.x1_pow_ln > best) {
      best = row.x1_pow_ln;
      branch = "x1_power";
      branch_l = l;
    }
    if (row.exp_term_ln > best) {
      best = row.exp_term_ln;
      branch = "exp_term";
      branch_l = l;
    }
  }
  res.c0 = LogValue::from_ln(best);
  res.branch = branch;
  res.branch_l = branch_l;
  return res;
}

struct X3Result {
  LogValue x3;
  std::string branch;  // exp_8l | exp_exp_13_3
};

/// x3(l) = max{exp(8l), exp(exp(13.3))}.
inline X3Result x_three(u64 l) {
  if (!is_prime_u64(l)) throw std::invalid_argument("x_three: l must be prime");
  const double cand_l = 8.0 * static_cast<double>(l);
  const double cand_e = std::exp(13.3);
  if (cand_l > cand_e) return {LogValue::from_ln(cand_l), "exp_8l"};
  return {LogValue::from_ln(cand_e), "exp_exp_13_3"};
}

struct C1Result {
  LogValue c1{0};
  u64 branch_l = 0;
  std::vector<std::pair<u64, X3Result>> per_l;
};

/// C1 = max over l in the set of x3(l)^(2310 |P|^2).
inline C1Result c_one(const PrimeBasis& basis, const SquaredFormChain& chain = {}) {
  if (basis.empty()) throw std::invalid_argument("c_one: prime set must be nonempty");
  C1Result res;
  const double m2 = static_cast<double>(basis.size()) * static_cast<double>(basis.size());
  double best = -std::numeric_limits<double>::infinity();
  for (u64 l : basis.primes) {
    X3Result x3 = x_three(l);
    const double cand = chain.exponent * m2 * x3.x3.ln;
    res.per_l.emplace_back(l, x3);
    if (cand > best) {
      best = cand;
      res.branch_l = l;
    }
  }
  res.c1 = LogValue::from_ln(best);
  return res;
}

struct AuditClause {
  std::string name;
  bool pass = false;
  double margin = 0;
  std::string detail;
};

struct ConstantsAuditReport {
  bool all_pass = false;
  std::vector<AuditClause> clauses;
};

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), tol, 48);
}

}  // namespace detail

/// Audits the arithmetic glue between the published constants: the exact
/// doublings, the parameter-choice inequalities, the sieve-count coefficient,
/// the threshold comparison against 2^(1/|P|) with the 1/C1 term pushed
/// through LogValue, and the abundancy-floor inequality.
inline ConstantsAuditReport consistency_audit() {
  ConstantsAuditReport rep;
  const ConstantChain main_chain;
  const SquaredFormChain sq;
  auto add = [&rep](std::string name, bool pass, double margin, std::string detail) {
    rep.clauses.push_back({std::move(name), pass, margin, std::move(detail)});
  };

  {  // (a) the published coefficients are exactly the doubled halves
    const bool ok = (2 * main_chain.b2 == 17.62196) && (2 * main_chain.b3 == 129.5214);
    add("a_doubling", ok, 0.0, "2*8.81098 == 17.62196 and 2*64.7607 == 129.5214, exact in binary64");
  }
  {  // (b) v > B0 u
    const double margin = main_chain.v - main_chain.b0 * main_chain.u;
    add("b_v_exceeds_b0u", margin > 0, margin,
        "v = 8.35 against B0*u = " + detail::fmt17(main_chain.b0 * main_chain.u));
  }
  {  // (c) sieve-count coefficient of the squared-form chain
    const double p0 = psi0(sq.b, sq.v, sq.u);
    const double val = sq.v_coeff * std::pow(sq.v, 1.5) / p0;
    const double margin = sq.s_bound - val;
    const bool ok = margin >= 0 && val + 1e-5 <= sq.pi_bound + 1e-12;
    add("c_sieve_coefficient", ok, margin,
        "0.56146 v^1.5 / psi0 = " + detail::fmt17(val) + " <= 16.65708; +1e-5 slack stays <= 16.65709");
  }
  {  // (d) the product coefficient is exactly twice the count coefficient
    const bool ok = 2 * sq.pi_bound == sq.product_bound;
    add("d_doubling", ok, 0.0, "2*16.65709 == 33.31418, exact in binary64");
  }
  {  // (e) 33.31418 <= sqrt(2310) ln 2, then the threshold with the 1/C1 term
    const double rhs = std::sqrt(sq.exponent) * std::log(2.0);
    const double margin = rhs - sq.product_bound;
    bool ok = margin > 0;
    std::string detail = "sqrt(2310)*ln2 = " + detail::fmt17(rhs) + ", margin " + detail::fmt17(margin);
    // exp(33.31418/(sqrt(2310) m) + 2/C1) < 2^(1/m): the 2m/C1 term must stay
    // below the per-m margin; compare in log space since C1 is astronomical.
    for (u64 m = 1; m <= 4 && ok; ++m) {
      std::vector<u64> members;
      const u64 pool[] = {3, 5, 7, 11};
      for (u64 i = 0; i < m; ++i) members.push_back(pool[i]);
      const C1Result c1 = c_one(PrimeBasis{members});
      const double budget = margin / std::sqrt(sq.exponent) / static_cast<double>(m);
      const double ln_term = std::log(2.0 * static_cast<double>(m)) - c1.c1.ln;
      ok = ln_term < std::log(budget);
      if (m == 1)
        detail += "; ln(2m/C1) = " + detail::fmt17(ln_term) +
                  " vs ln(margin/m) = " + detail::fmt17(std::log(budget));
    }
    add("e_threshold", ok, margin, detail);
  }
  {  // (f) (n/d) ((2(d+1)s-1)/(2(d+1)s))^s > sqrt(n/d) on a grid
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (u64 d = 1; d <= 6; ++d) {
      for (u64 n = d + 1; n <= 4 * d + 1; ++n) {
        if (std::gcd(n, d) != 1) continue;
        for (u64 s = 1; s <= 8; ++s) {
          const double q = 2.0 * static_cast<double>(d + 1) * static_cast<double>(s);
          const double lhs_ln = 0.5 * std::log(static_cast<double>(n) / static_cast<double>(d)) +
                                static_cast<double>(s) * std::log1p(-1.0 / q);
          worst = std::min(worst, lhs_ln);
          if (lhs_ln <= 0) ok = false;
        }
      }
    }
    add("f_abundancy_floor", ok, worst,
        "min over the (n,d,s) grid of ln[(n/d)^(1/2) ((2(d+1)s-1)/(2(d+1)s))^s]");
  }

  rep.all_pass = true;
  for (const auto& c : rep.clauses) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

/// Numeric walk of the bound chain at a hypothetical smallest prime q0:
/// the two tail-integral closed forms (each cross-checked by quadrature)
/// and the resulting inequality for ln q0.
struct PipelineTrace {
  double kappa = 0;
  double delta1 = 0;     // (n/d)^(1/(2|P|)), informational
  double delta1_ln = 0;  // used for the bound; safe for huge ratios
  LogValue x1{0};
  double mid_analytic = 0;   // integral of v^2/(t log^2 t) over [q0, q0^v]
  double mid_quadrature = 0;
  double tail_analytic = 0;  // integral of v^(1+kappa)/(t log^(1+kappa) t log^(1-kappa) q0), t >= q0^v
  double tail_quadrature = 0;
  bool quadrature_ok = false;
  double ln_q0_bound = 0;           // (ln x1 / ln delta1)(B2/kappa + B3)
  double ln_q0_bound_with_eps = 0;  // the eps-inclusive form
};

inline PipelineTrace pipeline_trace(const Theorem1Inputs& in, u64 l, double q0,
                                    const ConstantChain& chain = {}) {
  in.validate();
  if (!(q0 > std::exp(1.0)))
    throw std::invalid_argument("pipeline_trace: q0 must exceed e");
  if (!in.basis.contains(l)) throw std::invalid_argument("pipeline_trace: l must belong to the basis");

  PipelineTrace tr;
  const double phi_p = to_double_checked(in.basis.phi, "pipeline_trace: phi(P)");
  tr.kappa = static_cast<double>(l - 1) / phi_p;
  const double ln_ratio = ln_of(in.n) - ln_of(in.d);
  const double m = static_cast<double>(in.basis.size());
  tr.delta1_ln = ln_ratio / (2.0 * m);
  tr.delta1 = std::exp(tr.delta1_ln);
  tr.x1 = x_one(s_zero(in.s, in.n, in.basis), l, in.basis).x1;

  const double v = chain.v;
  const double lq = std::log(q0);
  tr.mid_analytic = v * v * (1.0 - 1.0 / v) / lq;
  tr.mid_quadrature =
      v * v * detail::adaptive_simpson([](double t) { return 1.0 / (t * t); }, lq, v * lq, 1e-13);

  const double kappa = tr.kappa;
  tr.tail_analytic = v / (kappa * lq);
  // substitute u = a e^w in the integral of u^(-1-kappa) du from a = v ln q0
  const double a = v * lq;
  const double cutoff = 44.0 / kappa;
  const double tail_core = detail::adaptive_simpson(
      [a, kappa](double w) { return std::pow(a, -kappa) * std::exp(-kappa * w); }, 0.0, cutoff,
      1e-14 * std::pow(a, -kappa) / kappa);
  tr.tail_quadrature = std::pow(v, 1.0 + kappa) / std::pow(lq, 1.0 - kappa) * tail_core;

  tr.quadrature_ok =
      std::abs(tr.mid_quadrature - tr.mid_analytic) <= 1e-6 * std::abs(tr.mid_analytic) &&
      std::abs(tr.tail_quadrature - tr.tail_analytic) <= 1e-6 * std::abs(tr.tail_analytic);

  tr.ln_q0_bound = tr.x1.ln / tr.delta1_ln * (chain.b2 / kappa + chain.b3);
  tr.ln_q0_bound_with_eps = in.eps + tr.ln_q0_bound;
  return tr;
}

}  // namespace sievebound
