// Command-line front end: every module surfaced as a subcommand with
// machine-readable JSON output and a reproducible run manifest.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sievebound/sievebound.hpp"

using namespace sievebound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInequalityFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct RunContext {
  std::string out;  // everything destined for stdout
  bool inequality_failed = false;
  u64 seed = 1;
  Budgets budgets;

  void emit(const Json& doc) {
    out += doc.dump();
    out += '\n';
  }
};

std::vector<u64> parse_prime_list(const std::vector<std::string>& raw) {
  std::vector<u64> out;
  for (const auto& tok : raw) {
    std::stringstream ss(tok);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      out.push_back(std::stoull(item));
    }
  }
  return out;
}

Rat parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rat(Int(text));
  return Rat(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
}

void parse_interval(const std::string& text, Int& start, u64& length) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("interval must look like START:LENGTH");
  start = Int(text.substr(0, colon));
  length = std::stoull(text.substr(colon + 1));
}

// ---------------------------------------------------------------- bound ---

void run_bound_thm1(RunContext& ctx, const std::string& n_s, const std::string& d_s, u64 s,
                    const std::vector<std::string>& primes_raw, double eps, bool eps_sweep,
                    double trace_q0) {
  Theorem1Inputs in;
  in.n = Int(n_s);
  in.d = Int(d_s);
  in.s = s;
  in.basis = PrimeBasis(parse_prime_list(primes_raw));
  in.eps = eps;

  Json sweep = Json::array();
  if (eps_sweep) {
    double best_eps = 0, best_ln = std::numeric_limits<double>::infinity();
    for (double e : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
      Theorem1Inputs probe = in;
      probe.eps = e;
      const double ln = c_zero(probe).c0.ln;
      Json row = Json::object();
      row.set("eps", e);
      row.set("ln", ln);
      sweep.push(std::move(row));
      if (ln < best_ln) {
        best_ln = ln;
        best_eps = e;
      }
    }
    in.eps = best_eps;
  }

  const CZeroResult res = c_zero(in);
  Json j = Json::object();
  j.set("theorem", "thm1");
  j.set("n", in.n);
  j.set("d", in.d);
  j.set("s", s);
  Json primes = Json::array();
  for (u64 p : in.basis.primes) primes.push(p);
  j.set("primes", std::move(primes));
  j.set("eps", in.eps);
  j.set("eps_swept", eps_sweep);
  if (eps_sweep) j.set("eps_sweep", std::move(sweep));
  j.set("p_below_21_warning", res.p_below_21);
  j.set("ln", res.c0.ln);
  j.set("log10", res.c0.log10());
  j.set("nested", render_nested(res.c0));
  j.set("branch", res.branch);
  j.set("branch_l", res.branch_l);
  j.set("L_value", res.L.x);
  j.set("L_clamped", res.L.clamped);
  Json per_l = Json::array();
  for (const auto& row : res.per_l) {
    Json r = Json::object();
    r.set("l", row.l);
    r.set("ln_x1", row.ln_x1);
    r.set("x1_branch", row.x1_branch);
    r.set("x1_pow_ln", row.x1_pow_ln);
    r.set("exp_term_ln", row.exp_term_ln);
    per_l.push(std::move(r));
  }
  j.set("per_l", std::move(per_l));

  if (trace_q0 > 0) {
    const auto tr = pipeline_trace(in, res.branch_l ? res.branch_l : in.basis.primes.front(),
                                   trace_q0);
    Json t = Json::object();
    t.set("q0", trace_q0);
    t.set("kappa", tr.kappa);
    t.set("delta1", tr.delta1);
    t.set("delta1_ln", tr.delta1_ln);
    t.set("ln_x1", tr.x1.ln);
    t.set("mid_integral_analytic", tr.mid_analytic);
    t.set("mid_integral_quadrature", tr.mid_quadrature);
    t.set("tail_integral_analytic", tr.tail_analytic);
    t.set("tail_integral_quadrature", tr.tail_quadrature);
    t.set("quadrature_ok", tr.quadrature_ok);
    t.set("ln_q0_bound", tr.ln_q0_bound);
    t.set("ln_q0_bound_with_eps", tr.ln_q0_bound_with_eps);
    j.set("trace", std::move(t));
    if (!tr.quadrature_ok) ctx.inequality_failed = true;
  }
  ctx.emit(j);
}

void run_bound_c1(RunContext& ctx, const std::string& theorem,
                  const std::vector<std::string>& primes_raw) {
  const PrimeBasis basis(parse_prime_list(primes_raw));
  const C1Result res = c_one(basis);
  Json j = Json::object();
  j.set("theorem", theorem);
  Json primes = Json::array();
  for (u64 p : basis.primes) primes.push(p);
  j.set("primes", std::move(primes));
  j.set("ln", res.c1.ln);
  j.set("log10", res.c1.log10());
  j.set("nested", render_nested(res.c1));
  j.set("branch_l", res.branch_l);
  Json per_l = Json::array();
  for (const auto& [l, x3] : res.per_l) {
    Json r = Json::object();
    r.set("l", l);
    r.set("ln_x3", x3.x3.ln);
    r.set("x3_branch", x3.branch);
    per_l.push(std::move(r));
  }
  j.set("per_l", std::move(per_l));
  ctx.emit(j);
}

// ---------------------------------------------------------------- audit ---

void run_audit_constants(RunContext& ctx) {
  const auto rep = consistency_audit();
  Json j = Json::object();
  j.set("all_pass", rep.all_pass);
  Json clauses = Json::array();
  for (const auto& c : rep.clauses) {
    Json r = Json::object();
    r.set("name", c.name);
    r.set("pass", c.pass);
    r.set("margin", c.margin);
    r.set("detail", c.detail);
    clauses.push(std::move(r));
  }
  j.set("clauses", std::move(clauses));
  ctx.emit(j);
  if (!rep.all_pass) ctx.inequality_failed = true;
}

// ------------------------------------------------------------------- ap ---

void run_ap_stats(RunContext& ctx, double x, u64 k, u64 a) {
  const auto st = ap_stats(x, k, a);
  Json j = Json::object();
  j.set("x", st.x);
  j.set("k", st.k);
  j.set("a", st.a);
  j.set("theta", st.theta);
  j.set("psi", st.psi);
  j.set("logp_over_p", st.logp_over_p);
  j.set("mertens_product", st.mertens_product);
  j.set("psi_error_ratio", st.psi_error_ratio);
  ctx.emit(j);
}

Json margin_json(const AuditMargin& m, bool with_class) {
  Json j = Json::object();
  j.set("margin", m.margin);
  j.set("at_t", m.at_t);
  if (with_class) {
    j.set("at_k", m.at_k);
    j.set("at_a", m.at_a);
  }
  return j;
}

void run_ap_audit(RunContext& ctx, u64 limit, u64 kmax) {
  const auto rep = classical_audit(limit, kmax, ctx.budgets);
  Json j = Json::object();
  j.set("limit", rep.limit);
  j.set("kmax", kmax);
  j.set("pass", rep.pass);
  j.set("sample_points", rep.sample_points);
  j.set("logp_sum", margin_json(rep.logp_sum, false));
  j.set("mertens", margin_json(rep.mertens, false));
  j.set("brun_titchmarsh", margin_json(rep.brun_titchmarsh, true));
  j.set("max_psi_error_ratio", rep.max_psi_error_ratio);
  Json at = Json::object();
  at.set("t", rep.psi_ratio_at_t);
  at.set("k", rep.psi_ratio_at_k);
  at.set("a", rep.psi_ratio_at_a);
  j.set("psi_ratio_at", std::move(at));
  Json fails = Json::array();
  for (const auto& f : rep.failures) fails.push(f);
  j.set("failures", std::move(fails));
  ctx.emit(j);
  if (!rep.pass) ctx.inequality_failed = true;
}

// ---------------------------------------------------------------- sieve ---

void run_sieve_verify(RunContext& ctx, u32 l, const std::vector<std::string>& U_raw, double z,
                      const std::string& kind, const std::string& system_file,
                      const std::string& dump_file, const std::string& interval, double w_opt) {
  ResidueSystem sys;
  if (!system_file.empty()) {
    std::ifstream in(system_file);
    if (!in) throw std::invalid_argument("sieve verify: cannot open " + system_file);
    sys = parse_system(in, z > 0 ? z : 0);
  } else if (kind == "thm4") {
    sys = thm4_residue_system(l, z);
  } else {
    sys = thm1_residue_system(l, parse_prime_list(U_raw), z);
  }
  if (!dump_file.empty()) {
    std::ofstream out(dump_file);
    serialize_system(sys, out);
  }

  Int start;
  u64 length = 0;
  parse_interval(interval, start, length);
  const double w = w_opt > 0 ? w_opt : sys.z;

  const auto rep = large_sieve_bound(static_cast<double>(length), w, sys, ctx.budgets.g_sum_nodes);
  const u64 empirical = sift_count({start, length}, sys, ctx.budgets);
  const bool holds = static_cast<double>(empirical) <= rep.bound;

  Json j = Json::object();
  j.set("kind", system_file.empty() ? kind : "file");
  if (system_file.empty()) {
    j.set("l", l);
    if (kind != "thm4") {
      Json u = Json::array();
      for (u64 r : parse_prime_list(U_raw)) u.push(r);
      j.set("U", std::move(u));
    }
  }
  j.set("z", sys.z);
  j.set("w", w);
  j.set("start", start);
  j.set("length", length);
  j.set("g_value", rep.G_value);
  j.set("bound", rep.bound);
  j.set("empirical", empirical);
  j.set("bound_holds", holds);
  ctx.emit(j);
  if (!holds) ctx.inequality_failed = true;
}

// --------------------------------------------------------------- search ---

void run_search_quasiperfect(RunContext& ctx, u64 limit, bool full, u64 spot_samples,
                             const std::string& ledger_path) {
  QuasiperfectOptions opt;
  opt.full_range = full;
  opt.spot_samples = spot_samples;
  opt.seed = ctx.seed;
  std::optional<ScanLedger> ledger;
  if (!ledger_path.empty()) ledger.emplace(ledger_path);
  const auto res = quasiperfect_scan(limit, opt, ctx.budgets, ledger ? &*ledger : nullptr);
  for (u64 n : res.hits) {
    Json j = Json::object();
    j.set("n", n);
    ctx.emit(j);
  }
  Json s = Json::object();
  s.set("scan", "quasiperfect");
  s.set("limit", limit);
  s.set("mode", full ? "full" : "odd_square");
  s.set("hits", static_cast<u64>(res.hits.size()));
  s.set("spot_samples", res.spot_samples);
  s.set("spot_consistent", res.spot_consistent);
  ctx.emit(s);
  if (!res.spot_consistent) ctx.inequality_failed = true;
}

void run_search_multiperfect(RunContext& ctx, const std::string& ratio, u64 limit,
                             const std::string& ledger_path) {
  const Rat target = parse_ratio(ratio);
  std::optional<ScanLedger> ledger;
  if (!ledger_path.empty()) ledger.emplace(ledger_path);
  const auto hits = multiperfect_scan(limit, target, ctx.budgets, ledger ? &*ledger : nullptr);
  for (u64 n : hits) {
    Json j = Json::object();
    j.set("n", n);
    ctx.emit(j);
  }
  Json s = Json::object();
  s.set("scan", "multiperfect");
  s.set("ratio", ratio);
  s.set("limit", limit);
  s.set("hits", static_cast<u64>(hits.size()));
  ctx.emit(s);
}

void run_search_kishore(RunContext& ctx, u64 limit, const std::string& ledger_path) {
  std::optional<ScanLedger> ledger;
  if (!ledger_path.empty()) ledger.emplace(ledger_path);
  const auto hits = kishore_search(limit, ctx.budgets, ledger ? &*ledger : nullptr);
  for (const auto& [m, n] : hits) {
    Json j = Json::object();
    j.set("m", m);
    j.set("n", n);
    const auto rep = kishore_check(m, n);
    j.set("form_ok", rep.form_ok);
    j.set("h_exceeds_2", rep.h_exceeds_2);
    j.set("sigma_residues_ok", rep.sigma_residues_ok);
    ctx.emit(j);
  }
  Json s = Json::object();
  s.set("scan", "kishore");
  s.set("limit", limit);
  s.set("hits", static_cast<u64>(hits.size()));
  ctx.emit(s);
}

// ------------------------------------------------------------- manifest ---

Json parameters_from_argv(const std::vector<std::string>& argv) {
  Json params = Json::object();
  for (size_t i = 0; i < argv.size(); ++i) {
    if (argv[i].rfind("--", 0) == 0) {
      const std::string key = argv[i].substr(2);
      if (i + 1 < argv.size() && argv[i + 1].rfind("--", 0) != 0) {
        params.set(key, argv[i + 1]);
        ++i;
      } else {
        params.set(key, true);
      }
    }
  }
  return params;
}

void write_manifest(const std::string& path, const std::vector<std::string>& argv,
                    const std::string& subcommand, const RunContext& ctx, double wall_ms) {
  Json m = Json::object();
  m.set("subcommand", subcommand);
  Json args = Json::array();
  for (const auto& a : argv) args.push(a);
  m.set("argv", std::move(args));
  m.set("parameters", parameters_from_argv(argv));
  m.set("seed", ctx.seed);
  Json b = Json::object();
  b.set("sift_length", ctx.budgets.sift_length);
  b.set("g_sum_nodes", ctx.budgets.g_sum_nodes);
  b.set("sigma_table_entries", ctx.budgets.sigma_table_entries);
  b.set("scan_limit", ctx.budgets.scan_limit);
  b.set("scan_segment", ctx.budgets.scan_segment);
  b.set("audit_limit", ctx.budgets.audit_limit);
  b.set("threads", static_cast<long long>(ctx.budgets.threads));
  m.set("budgets", std::move(b));
  char digest[32];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(fnv1a64(ctx.out)));
  m.set("outputs_digest", digest);
  m.set("wall_time_ms", wall_ms);
  std::ofstream out(path);
  out << m.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"large-sieve bounds and divisor-sum searches"};
  app.require_subcommand(1);
  // global flags may appear after the subcommand; let them fall through
  app.fallthrough();

  RunContext ctx;
  std::string config_path, manifest_path = "sievebound-manifest.json";
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--manifest", manifest_path, "run-manifest sidecar path (empty disables)");
  app.add_option("--seed", ctx.seed, "seed for randomized spot checks");
  auto* o_threads = app.add_option("--threads", ctx.budgets.threads, "worker pool size (0 = auto)");
  auto* o_sift = app.add_option("--sift-budget", ctx.budgets.sift_length, "max sift interval length");
  auto* o_nodes = app.add_option("--g-nodes", ctx.budgets.g_sum_nodes, "divisor enumeration node budget");
  auto* o_table = app.add_option("--table-budget", ctx.budgets.sigma_table_entries, "max dense sigma-table entries");
  auto* o_scan = app.add_option("--scan-limit", ctx.budgets.scan_limit, "max search scan range");
  auto* o_seg = app.add_option("--scan-segment", ctx.budgets.scan_segment, "scan segment length");
  auto* o_audit = app.add_option("--audit-limit", ctx.budgets.audit_limit, "max classical-audit range");

  // bound
  auto* bound = app.add_subcommand("bound", "explicit bound constants, reported in log space");
  bound->require_subcommand(1);
  std::string b_n = "2", b_d = "1";
  u64 b_s = 1;
  std::vector<std::string> b_primes;
  double b_eps = 1.0, b_trace_q0 = 0;
  bool b_eps_sweep = false;
  auto* thm1 = bound->add_subcommand("thm1", "smallest-prime-factor bound for n/d-perfect forms");
  thm1->add_option("--n", b_n, "target ratio numerator")->required();
  thm1->add_option("--d", b_d, "target ratio denominator")->required();
  thm1->add_option("--s", b_s, "count of unconstrained exponents")->required();
  thm1->add_option("--primes", b_primes, "prime set, comma separated")->required();
  thm1->add_option("--eps", b_eps, "free parameter (any positive value admissible)");
  thm1->add_flag("--eps-sweep", b_eps_sweep, "minimize ln C0 over an eps grid");
  thm1->add_option("--trace-q0", b_trace_q0, "also emit the bound-chain trace at this q0");

  std::vector<std::string> b2_primes, b4_primes;
  auto* thm2 = bound->add_subcommand("thm2", "bound for quasiperfect squared forms");
  thm2->add_option("--primes", b2_primes, "prime set, comma separated")->required();
  auto* thm4 = bound->add_subcommand("thm4", "bound for the general squared-form hypothesis");
  thm4->add_option("--primes", b4_primes, "prime set, comma separated")->required();

  // audit
  auto* audit = app.add_subcommand("audit", "internal consistency audits");
  audit->require_subcommand(1);
  auto* audit_constants = audit->add_subcommand("constants", "verify the published constant chain");

  // ap
  auto* ap = app.add_subcommand("ap", "prime-progression statistics and audits");
  ap->require_subcommand(1);
  double ap_x = 1000;
  u64 ap_k = 1, ap_a = 0, ap_limit = 10000, ap_kmax = 100;
  auto* ap_stats_cmd = ap->add_subcommand("stats", "theta/psi/log-sum/product record for one class");
  ap_stats_cmd->add_option("--x", ap_x, "upper end of the range")->required();
  ap_stats_cmd->add_option("--k", ap_k, "modulus")->required();
  ap_stats_cmd->add_option("--a", ap_a, "residue class")->required();
  auto* ap_audit_cmd = ap->add_subcommand("audit", "classical inequality audit on a log grid");
  ap_audit_cmd->add_option("--limit", ap_limit, "sample up to this bound")->required();
  ap_audit_cmd->add_option("--kmax", ap_kmax, "largest modulus audited");

  // sieve
  auto* sieve = app.add_subcommand("sieve", "residue-system sieve checks");
  sieve->require_subcommand(1);
  u32 sv_l = 3;
  std::vector<std::string> sv_U;
  double sv_z = 0, sv_w = 0;
  std::string sv_kind = "thm1", sv_system, sv_dump, sv_interval;
  auto* verify = sieve->add_subcommand("verify", "large-sieve bound against an exhaustive sift");
  verify->add_option("--l", sv_l, "order parameter l");
  verify->add_option("--U", sv_U, "sifting primes (thm1 kind), comma separated");
  verify->add_option("--z", sv_z, "sifting limit");
  verify->add_option("--w", sv_w, "bound evaluation point (defaults to z)");
  verify->add_option("--kind", sv_kind, "system construction: thm1 or thm4")
      ->check(CLI::IsMember({"thm1", "thm4"}));
  verify->add_option("--system", sv_system, "read the residue system from this file");
  verify->add_option("--dump-system", sv_dump, "write the residue system to this file");
  verify->add_option("--interval", sv_interval, "interval START:LENGTH to sift")->required();

  // search
  auto* search = app.add_subcommand("search", "desk-scale structured searches");
  search->require_subcommand(1);
  u64 q_limit = 0, q_spot = 1'000'000;
  bool q_full = false;
  std::string q_ledger;
  auto* qp = search->add_subcommand("quasiperfect", "sigma(N) = 2N + 1");
  qp->add_option("--limit", q_limit, "scan bound")->required();
  qp->add_flag("--full", q_full, "full-range mode instead of the odd-square shortcut");
  qp->add_option("--spot-samples", q_spot, "random full-range spot checks");
  qp->add_option("--ledger", q_ledger, "resumable segment ledger path");

  std::string m_ratio;
  u64 m_limit = 0;
  std::string m_ledger;
  auto* mp = search->add_subcommand("multiperfect", "sigma(N)/N = n/d exactly");
  mp->add_option("--ratio", m_ratio, "target abundancy N/D")->required();
  mp->add_option("--limit", m_limit, "scan bound")->required();
  mp->add_option("--ledger", m_ledger, "resumable segment ledger path");

  u64 k_limit = 0;
  std::string k_ledger;
  auto* ks = search->add_subcommand("kishore", "sigma(m) sigma(n) = (m+n)^2, opposite parity, coprime");
  ks->add_option("--limit", k_limit, "bound on both members")->required();
  ks->add_option("--ledger", k_ledger, "resumable segment ledger path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::string subcommand;
  try {
    if (!config_path.empty()) {
      // explicit flags win over the config file, which wins over defaults
      const Budgets from_flags = ctx.budgets;
      Budgets merged;
      apply_config_file(config_path, merged);
      if (o_threads->count() == 0) ctx.budgets.threads = merged.threads;
      if (o_sift->count() == 0) ctx.budgets.sift_length = merged.sift_length;
      if (o_nodes->count() == 0) ctx.budgets.g_sum_nodes = merged.g_sum_nodes;
      if (o_table->count() == 0) ctx.budgets.sigma_table_entries = merged.sigma_table_entries;
      if (o_scan->count() == 0) ctx.budgets.scan_limit = merged.scan_limit;
      if (o_seg->count() == 0) ctx.budgets.scan_segment = merged.scan_segment;
      if (o_audit->count() == 0) ctx.budgets.audit_limit = merged.audit_limit;
      (void)from_flags;
    }

    if (thm1->parsed()) {
      subcommand = "bound thm1";
      run_bound_thm1(ctx, b_n, b_d, b_s, b_primes, b_eps, b_eps_sweep, b_trace_q0);
    } else if (thm2->parsed()) {
      subcommand = "bound thm2";
      run_bound_c1(ctx, "thm2", b2_primes);
    } else if (thm4->parsed()) {
      subcommand = "bound thm4";
      run_bound_c1(ctx, "thm4", b4_primes);
    } else if (audit_constants->parsed()) {
      subcommand = "audit constants";
      run_audit_constants(ctx);
    } else if (ap_stats_cmd->parsed()) {
      subcommand = "ap stats";
      run_ap_stats(ctx, ap_x, ap_k, ap_a);
    } else if (ap_audit_cmd->parsed()) {
      subcommand = "ap audit";
      run_ap_audit(ctx, ap_limit, ap_kmax);
    } else if (verify->parsed()) {
      subcommand = "sieve verify";
      run_sieve_verify(ctx, sv_l, sv_U, sv_z, sv_kind, sv_system, sv_dump, sv_interval, sv_w);
    } else if (qp->parsed()) {
      subcommand = "search quasiperfect";
      run_search_quasiperfect(ctx, q_limit, q_full, q_spot, q_ledger);
    } else if (mp->parsed()) {
      subcommand = "search multiperfect";
      run_search_multiperfect(ctx, m_ratio, m_limit, m_ledger);
    } else if (ks->parsed()) {
      subcommand = "search kishore";
      run_search_kishore(ctx, k_limit, k_ledger);
    }
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::fputs(ctx.out.c_str(), stdout);
  std::fflush(stdout);

  if (!manifest_path.empty()) {
    std::vector<std::string> raw_args;
    for (int i = 1; i < argc; ++i) raw_args.emplace_back(argv[i]);
    write_manifest(manifest_path, raw_args, subcommand, ctx, wall_ms);
  }

  return ctx.inequality_failed ? kExitInequalityFailed : kExitOk;
}
