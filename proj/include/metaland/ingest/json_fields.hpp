#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "metaland/core/date.hpp"
#include "metaland/core/decimal.hpp"
#include "metaland/core/error.hpp"

namespace metaland::json_fields {

using json = nlohmann::json;

inline const json& require(const json& obj, std::string_view key, std::string_view ctx) {
  if (!obj.is_object()) throw ParseError(std::string(ctx) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) throw ParseError(std::string(ctx) + ": missing field '" + std::string(key) + "'");
  return *it;
}

inline bool has(const json& obj, std::string_view key) {
  auto it = obj.find(key);
  return it != obj.end() && !it->is_null();
}

inline std::string get_string(const json& obj, std::string_view key, std::string_view ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_string()) throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

inline bool get_bool(const json& obj, std::string_view key, std::string_view ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_boolean()) throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be a boolean");
  return v.get<bool>();
}

inline double as_double(const json& v, std::string_view key, std::string_view ctx) {
  if (!v.is_number()) throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

inline double get_double(const json& obj, std::string_view key, std::string_view ctx) {
  return as_double(require(obj, key, ctx), key, ctx);
}

inline std::int64_t as_int(const json& v, std::string_view key, std::string_view ctx) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<std::int64_t>(d)) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return out;
  }
  throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be an integer");
}

inline std::int64_t get_int(const json& obj, std::string_view key, std::string_view ctx) {
  return as_int(require(obj, key, ctx), key, ctx);
}

inline std::uint64_t get_uint(const json& obj, std::string_view key, std::string_view ctx) {
  const json& v = require(obj, key, ctx);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return out;
  }
  const auto i = as_int(v, key, ctx);
  if (i < 0) throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be non-negative");
  return static_cast<std::uint64_t>(i);
}

/// Decimals are accepted as JSON strings (exact) or numbers (rounded).
inline Decimal as_decimal(const json& v, std::string_view key, std::string_view ctx) {
  if (v.is_string()) return Decimal::parse(v.get<std::string>());
  if (v.is_number()) return Decimal::from_double(v.get<double>());
  throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be a decimal");
}

inline Decimal get_decimal(const json& obj, std::string_view key, std::string_view ctx) {
  return as_decimal(require(obj, key, ctx), key, ctx);
}

inline Day get_day(const json& obj, std::string_view key, std::string_view ctx) {
  return parse_day(get_string(obj, key, ctx));
}

inline Timestamp get_timestamp(const json& obj, std::string_view key, std::string_view ctx) {
  return parse_timestamp(get_string(obj, key, ctx));
}

/// Parses one JSON document; any library failure becomes a ParseError.
inline json parse_document(std::string_view text, std::string_view ctx) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string(ctx) + ": malformed document: " + e.what());
  }
}

}  // namespace metaland::json_fields
