#pragma once

// Text output helpers. Every number leaves the library as a 17-significant-
// digit decimal, which round-trips exactly through strtod.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace archlab {

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Flat JSON object emitter; keys are written in insertion order.
class JsonObject {
 public:
  JsonObject& add(std::string_view key, double value) {
    return raw(key, std::isfinite(value) ? format_number(value) : std::string("null"));
  }
  JsonObject& add(std::string_view key, std::uint64_t value) { return raw(key, std::to_string(value)); }
  JsonObject& add(std::string_view key, bool value) { return raw(key, value ? "true" : "false"); }
  JsonObject& add(std::string_view key, std::string_view value) { return raw(key, quote(value)); }
  JsonObject& add(std::string_view key, const char* value) { return add(key, std::string_view(value)); }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      if (i) out += ", ";
      out += quote(fields_[i].first) + ":" + fields_[i].second;
    }
    return out + "}";
  }

 private:
  JsonObject& raw(std::string_view key, std::string text) {
    fields_.emplace_back(std::string(key), std::move(text));
    return *this;
  }

  static std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out + "\"";
  }

  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace archlab
