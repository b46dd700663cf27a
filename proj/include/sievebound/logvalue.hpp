#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "sievebound/integer.hpp"

namespace sievebound {

/// A positive real stored as its natural logarithm.  The bound constants
/// have ln around 1e9..1e10, so this is the only faithful representation;
/// multiplication is ln addition and powering is ln scaling, both exact up
/// to floating error.
struct LogValue {
  double ln = 0.0;  // natural log of the represented value

  static LogValue from_ln(double l) {
    if (!std::isfinite(l)) throw std::invalid_argument("LogValue: ln must be finite");
    return LogValue{l};
  }
  static LogValue from_value(double v) {
    if (!(v > 0)) throw std::invalid_argument("LogValue: value must be positive");
    return from_ln(std::log(v));
  }
  static LogValue from_int(const Int& v) { return from_ln(ln_of(v)); }

  double log10() const { return ln / 2.302585092994046; }

  LogValue operator*(const LogValue& o) const { return from_ln(ln + o.ln); }
  LogValue pow(double c) const { return from_ln(ln * c); }

  friend bool operator<(const LogValue& a, const LogValue& b) { return a.ln < b.ln; }
  friend bool operator>(const LogValue& a, const LogValue& b) { return a.ln > b.ln; }
  friend bool operator<=(const LogValue& a, const LogValue& b) { return a.ln <= b.ln; }
  friend bool operator>=(const LogValue& a, const LogValue& b) { return a.ln >= b.ln; }
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Nested rendering: "exp(L)" while the exponent is printable, and
/// "exp(exp(M))" once ln exceeds 1e6.  Round-trips through parse_nested.
inline std::string render_nested(const LogValue& v) {
  if (v.ln <= 1e6) return "exp(" + detail::fmt17(v.ln) + ")";
  return "exp(exp(" + detail::fmt17(std::log(v.ln)) + "))";
}

inline LogValue parse_nested(const std::string& s) {
  double m = 0;
  if (std::sscanf(s.c_str(), "exp(exp(%lf))", &m) == 1)
    return LogValue::from_ln(std::exp(m));
  if (std::sscanf(s.c_str(), "exp(%lf)", &m) == 1) return LogValue::from_ln(m);
  throw std::invalid_argument("parse_nested: unrecognized form '" + s + "'");
}

}  // namespace sievebound
