#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "sievebound/integer.hpp"

namespace sievebound {

/// Resource ceilings for the expensive operations.  Defaults are sized for
/// desk-scale runs; the CLI lets a config file or flags raise them.
struct Budgets {
  u64 sift_length = 100'000'000;        // max interval length for exhaustive sifting
  u64 g_sum_nodes = 1'000'000'000;      // divisor-enumeration node ceiling
  u64 sigma_table_entries = 1u << 26;   // max dense sigma-table size
  u64 scan_limit = 2'000'000'000;       // max scan range for searches
  u64 scan_segment = 1u << 22;          // segment length for segmented scans
  u64 audit_limit = 10'000'000;         // max classical-audit sample range
  int threads = 0;                      // 0 = hardware concurrency
};

inline int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Parses an environment-style `key=value` config file.  Blank lines and
/// lines starting with '#' are skipped; unknown keys are rejected.
inline void apply_config_file(const std::string& path, Budgets& budgets) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    auto as_u64 = [&]() -> u64 {
      std::istringstream ss(value);
      u64 v = 0;
      if (!(ss >> v) || !(ss >> std::ws).eof())
        throw std::invalid_argument("config: bad value for " + key);
      return v;
    };
    if (key == "sift_length") budgets.sift_length = as_u64();
    else if (key == "g_sum_nodes") budgets.g_sum_nodes = as_u64();
    else if (key == "sigma_table_entries") budgets.sigma_table_entries = as_u64();
    else if (key == "scan_limit") budgets.scan_limit = as_u64();
    else if (key == "scan_segment") budgets.scan_segment = as_u64();
    else if (key == "audit_limit") budgets.audit_limit = as_u64();
    else if (key == "threads") budgets.threads = static_cast<int>(as_u64());
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

}  // namespace sievebound
