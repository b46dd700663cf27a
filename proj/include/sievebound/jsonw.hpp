#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sievebound/integer.hpp"

namespace sievebound {

/// Minimal JSON document builder.  Object keys keep insertion order and
/// every floating-point number is emitted with 17 significant digits, so a
/// given document always serializes to the same bytes.
class Json {
 public:
  Json() : value_(nullptr) {}
  Json(std::nullptr_t) : value_(nullptr) {}
  Json(bool b) : value_(b) {}
  Json(int v) : value_(static_cast<long long>(v)) {}
  Json(unsigned v) : value_(static_cast<long long>(v)) {}
  Json(long v) : value_(static_cast<long long>(v)) {}
  Json(long long v) : value_(v) {}
  Json(u64 v) : value_(Int(v)) {}
  Json(const Int& v) : value_(v) {}
  Json(double v) : value_(v) {
    if (!std::isfinite(v)) throw std::invalid_argument("Json: non-finite number");
  }
  Json(const char* s) : value_(std::string(s)) {}
  Json(std::string s) : value_(std::move(s)) {}

  static Json array() {
    Json j;
    j.value_ = Array{};
    return j;
  }
  static Json object() {
    Json j;
    j.value_ = Object{};
    return j;
  }

  Json& push(Json v) {
    std::get<Array>(value_).items.push_back(std::move(v));
    return *this;
  }
  Json& set(std::string key, Json v) {
    std::get<Object>(value_).items.emplace_back(std::move(key), std::move(v));
    return *this;
  }

  std::string dump() const {
    std::string out;
    write(out);
    return out;
  }

 private:
  struct Array {
    std::vector<Json> items;
  };
  struct Object {
    std::vector<std::pair<std::string, Json>> items;
  };

  static void write_escaped(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    out += '"';
  }

  void write(std::string& out) const {
    if (std::holds_alternative<std::nullptr_t>(value_)) {
      out += "null";
    } else if (std::holds_alternative<bool>(value_)) {
      out += std::get<bool>(value_) ? "true" : "false";
    } else if (std::holds_alternative<long long>(value_)) {
      out += std::to_string(std::get<long long>(value_));
    } else if (std::holds_alternative<Int>(value_)) {
      out += std::get<Int>(value_).str();
    } else if (std::holds_alternative<double>(value_)) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(value_));
      out += buf;
    } else if (std::holds_alternative<std::string>(value_)) {
      write_escaped(std::get<std::string>(value_), out);
    } else if (std::holds_alternative<Array>(value_)) {
      out += '[';
      const auto& items = std::get<Array>(value_).items;
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        items[i].write(out);
      }
      out += ']';
    } else {
      out += '{';
      const auto& items = std::get<Object>(value_).items;
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        write_escaped(items[i].first, out);
        out += ':';
        items[i].second.write(out);
      }
      out += '}';
    }
  }

  std::variant<std::nullptr_t, bool, long long, Int, double, std::string, Array, Object> value_;
};

}  // namespace sievebound
