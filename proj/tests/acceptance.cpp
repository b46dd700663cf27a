// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line with the measured quantity behind it.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "sievebound/sievebound.hpp"

using namespace sievebound;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  std::string out;
  int exit_code = -1;
};

CliResult run_cli(const std::string& args) {
  const std::string manifest =
      (fs::temp_directory_path() / "sb_acceptance_manifest.json").string();
  const std::string cmd =
      std::string(SIEVEBOUND_CLI_PATH) + " " + args + " --manifest " + manifest + " 2>/dev/null";
  CliResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

double json_number(const std::string& doc, const std::string& key) {
  const auto pos = doc.find("\"" + key + "\":");
  REQUIRE(pos != std::string::npos);
  return std::strtod(doc.c_str() + pos + key.size() + 3, nullptr);
}

void report(int criterion, const char* label, bool pass, const std::string& detail) {
  std::printf("ACCEPTANCE %2d [%s]: %s  (%s)\n", criterion, label, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  REQUIRE(pass);
}

}  // namespace

TEST_CASE("criterion 1: constant reproduction through the CLI") {
  const auto thm2 = run_cli("bound thm2 --primes 3");
  const double ln_c1 = json_number(thm2.out, "ln");
  const double expect_c1 = 1379521867.8614065;  // 2310 e^13.3, 40-digit oracle
  const bool ok_c1 = thm2.exit_code == 0 && std::abs(ln_c1 - expect_c1) <= 1e-12 * expect_c1;

  const auto thm1 = run_cli("bound thm1 --n 2 --d 1 --s 1 --primes 3 --eps 1");
  const double ln_c0 = json_number(thm1.out, "ln");
  const double expect_c0 = 13938494950.752477;  // (17.62196*2+129.5214*2) e^18 / (2 ln 2)
  const bool ok_c0 = thm1.exit_code == 0 && std::abs(ln_c0 - expect_c0) <= 1e-12 * expect_c0 &&
                     thm1.out.find("\"branch\":\"exp_term\"") != std::string::npos;

  char detail[160];
  std::snprintf(detail, sizeof(detail), "ln C1 = %.12e, ln C0 = %.12e", ln_c1, ln_c0);
  report(1, "constants", ok_c1 && ok_c0, detail);
}

TEST_CASE("criterion 2: consistency audit") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = consistency_audit();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = rep.all_pass && rep.clauses.size() == 6 && secs < 1.0;
  double e_margin = 0;
  for (const auto& c : rep.clauses) {
    if (c.name == "e_threshold") e_margin = c.margin;
    ok = ok && c.pass;
  }
  // the tight clause-(e) margin sits at 1.8e-4 (reported as ~1.9e-4 when
  // rounded through 7-digit displays)
  ok = ok && e_margin > 1.5e-4 && e_margin < 2.2e-4;
  char detail[120];
  std::snprintf(detail, sizeof(detail), "6/6 clauses, clause-e margin %.5e, %.2fs", e_margin, secs);
  report(2, "audit", ok, detail);
}

TEST_CASE("criterion 3: large-sieve soundness on 500 randomized systems") {
  std::mt19937_64 rng(20260810);
  u64 violations = 0, checked = 0;
  Budgets budgets;
  for (int trial = 0; trial < 500; ++trial) {
    const bool thm4 = rng() % 3 == 0;
    const double z = 10 + rng() % 991;  // z <= 1001
    ResidueSystem sys;
    u32 l = 3;
    if (thm4) {
      l = std::array<u32, 3>{3, 5, 7}[rng() % 3];
      sys = thm4_residue_system(l, z);
    } else {
      l = std::array<u32, 4>{2, 3, 5, 7}[rng() % 4];
      std::vector<u64> U;
      for (u64 r : primes_up_to(static_cast<u64>(z)))
        if (r % l == 1 && rng() % 2 == 0) U.push_back(r);
      sys = thm1_residue_system(l, U, z);
    }
    const double w = 2 + static_cast<double>(rng() % static_cast<u64>(z - 1));
    const u64 X = 1 + rng() % 1'000'000;
    const Int start = 1 + rng() % 1'000'000'000;
    const auto rep = large_sieve_bound(static_cast<double>(X), w, sys, budgets.g_sum_nodes);
    const u64 observed = sift_count({start, X}, sys, budgets);
    ++checked;
    if (static_cast<double>(observed) > rep.bound * (1 + 1e-12)) ++violations;
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "%llu systems, %llu violations",
                static_cast<unsigned long long>(checked),
                static_cast<unsigned long long>(violations));
  report(3, "large-sieve", violations == 0 && checked == 500, detail);
}

TEST_CASE("criterion 4: G lower bound on exhaustively enumerable systems") {
  std::mt19937_64 rng(41);
  u64 violations = 0, checked = 0;
  while (checked < 200) {
    const bool thm4 = rng() % 3 == 0;
    const double z = 5 + rng() % 56;  // z <= 60
    ResidueSystem sys;
    if (thm4) {
      sys = thm4_residue_system(std::array<u32, 3>{3, 5, 7}[rng() % 3], z);
    } else {
      const u32 l = std::array<u32, 4>{2, 3, 5, 7}[rng() % 4];
      std::vector<u64> U;
      for (u64 r : primes_up_to(static_cast<u64>(z)))
        if (r % l == 1 && rng() % 2 == 0) U.push_back(r);
      sys = thm1_residue_system(l, U, z);
    }
    const double B = b_of(sys);
    if (!(B > 0)) continue;
    const double u = 2.0 + static_cast<double>(rng() % 100) / 100.0;
    const double v = u * B * (1.0 + static_cast<double>(rng() % 200) / 100.0);
    const double x = std::pow(sys.z, v);
    if (!std::isfinite(x)) continue;
    const double lower = g_lower_bound(sys, x, u);
    const double exact = g_sum(sys, std::pow(x, 1.0 / u));
    ++checked;
    if (exact < lower * (1 - 1e-12)) ++violations;
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "%llu systems, %llu violations",
                static_cast<unsigned long long>(checked),
                static_cast<unsigned long long>(violations));
  report(4, "G-lower-bound", violations == 0, detail);
}

TEST_CASE("criterion 5: order/divisibility equivalence below 1e4") {
  u64 mismatches = 0, pairs = 0;
  for (u32 l : {2u, 3u, 5u, 7u}) {
    for (u64 r : primes_up_to(10'000)) {
      if (r % l != 1) continue;
      const auto classes = order_l_residues(static_cast<u32>(r), l);
      for (u64 q = 0; q < r; ++q) {
        const bool divides = geometric_sum_mod(q, l, r) == 0;
        const bool ordered =
            std::binary_search(classes.begin(), classes.end(), static_cast<u32>(q));
        pairs += 1;
        if (divides != ordered) ++mismatches;
      }
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "%llu (r,q) pairs, %llu mismatches",
                static_cast<unsigned long long>(pairs),
                static_cast<unsigned long long>(mismatches));
  report(5, "order-equivalence", mismatches == 0 && pairs > 1'000'000, detail);
}

TEST_CASE("criterion 6: classical inequalities up to 1e7") {
  const auto rep = classical_audit(10'000'000, 100);
  const bool ok = rep.pass && rep.failures.empty() && rep.logp_sum.margin > 0 &&
                  rep.mertens.margin > 0 && rep.brun_titchmarsh.margin > 0;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "%llu samples; worst margins: logp %.4f, mertens %.4f, BT %.4f",
                static_cast<unsigned long long>(rep.sample_points), rep.logp_sum.margin,
                rep.mertens.margin, rep.brun_titchmarsh.margin);
  report(6, "classical-audit", ok, detail);
}

TEST_CASE("criterion 7: partial summation on 50 random ranges") {
  std::mt19937_64 rng(77);
  u64 failures = 0;
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const double w = 2 + rng() % 5000;
    const double z = w + 1 + rng() % 50000;
    const u64 k = 1 + rng() % 15;
    u64 a = rng() % k;
    while (std::gcd(a, k) != 1) a = rng() % k;
    const auto [lhs, rhs] = partial_summation_check(w, z, k, a);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-2});
    const double rel = std::abs(lhs - rhs) / scale;
    worst = std::max(worst, rel);
    if (rel > 1e-10) ++failures;
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "worst relative gap %.3e", worst);
  report(7, "partial-summation", failures == 0, detail);
}

TEST_CASE("criterion 8: scans reproduce the classical lists") {
  const auto perfect = multiperfect_scan(10'000, Rat(2));
  const bool ok_perfect = perfect == std::vector<u64>{6, 28, 496, 8128};

  const auto triperfect = multiperfect_scan(1'000'000, Rat(3));
  const bool ok_triperfect = triperfect == std::vector<u64>{120, 672, 523776};

  QuasiperfectOptions opt;  // odd-square mode with the default 1e6 spot checks
  const auto quasi = quasiperfect_scan(100'000'000, opt);
  const bool ok_quasi = quasi.hits.empty() && quasi.spot_consistent &&
                        quasi.spot_samples == 1'000'000;

  const bool ok_amicable = amicable_check(220, 284);

  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "h=2 hits %zu, h=3 hits %zu, quasiperfect hits %zu (spots %llu), amicable %d",
                perfect.size(), triperfect.size(), quasi.hits.size(),
                static_cast<unsigned long long>(quasi.spot_samples), ok_amicable ? 1 : 0);
  report(8, "scans", ok_perfect && ok_triperfect && ok_quasi && ok_amicable, detail);
}

TEST_CASE("criterion 9: hypothesis survivors sit below C1 through LogValue") {
  u64 survivors = 0, compared = 0;
  bool all_below = true;
  for (const auto& members :
       {std::vector<u64>{3}, std::vector<u64>{3, 5}, std::vector<u64>{3, 5, 7}}) {
    const PrimeBasis basis(members);
    const LogValue c1 = c_one(basis).c1;
    for (u64 m = 3; m * m <= 100'000'000; m += 2) {
      Factorization f = factorize(m);
      for (auto& [p, e] : f.entries) e *= 2;
      const auto rep = thm4_hypothesis_check(f, basis);
      if (rep.all_hold) {
        ++survivors;
        ++compared;
        if (!(LogValue::from_int(rep.smallest_prime) < c1)) all_below = false;
      }
    }
    // the comparison machinery itself must execute even when no N survives
    ++compared;
    if (!(LogValue::from_value(3.0) < c1)) all_below = false;
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "%llu survivors, %llu LogValue comparisons",
                static_cast<unsigned long long>(survivors),
                static_cast<unsigned long long>(compared));
  report(9, "thm4-wiring", all_below && compared >= 3, detail);
}

TEST_CASE("criterion 10: byte-identical output across runs and pool sizes") {
  const std::vector<std::string> fixed = {
      "bound thm2 --primes 3",
      "bound thm1 --n 2 --d 1 --s 1 --primes 3 --eps 1",
      "audit constants",
      "ap stats --x 100000 --k 4 --a 1",
      "ap audit --limit 100000",
      "search multiperfect --ratio 3/1 --limit 1000000",
      "search kishore --limit 20000",
  };
  bool ok = true;
  for (const auto& args : fixed) {
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    if (a.out != b.out || a.out.empty()) ok = false;
  }
  const std::vector<std::string> pooled = {
      "sieve verify --l 3 --U 7,13 --z 100 --interval 1:2000000",
      "search quasiperfect --limit 1000000 --spot-samples 20000",
  };
  for (const auto& args : pooled) {
    const auto one = run_cli(args + " --threads 1");
    const auto many = run_cli(args + " --threads 4");
    const auto again = run_cli(args + " --threads 4");
    if (one.out != many.out || many.out != again.out || one.out.empty()) ok = false;
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "%zu fixed + %zu pooled command lines",
                fixed.size(), pooled.size());
  report(10, "determinism", ok, detail);
}
