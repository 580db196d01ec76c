#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "metaland/core/error.hpp"

namespace metaland {

/// Fixed-point decimal with six fractional digits.
///
/// Monetary amounts (crypto and USD) are stored as integer micro-units so that
/// volume sums are exact and independent of summation order.
class Decimal {
 public:
  static constexpr std::int64_t kScale = 1'000'000;
  static constexpr int kDigits = 6;

  constexpr Decimal() = default;

  static constexpr Decimal from_micros(std::int64_t micros) {
    Decimal d;
    d.micros_ = micros;
    return d;
  }

  static constexpr Decimal from_int(std::int64_t units) { return from_micros(units * kScale); }

  static Decimal from_double(double value) {
    if (!std::isfinite(value)) throw ParseError("decimal: non-finite value");
    if (std::fabs(value) > 9.0e12) throw ParseError("decimal: value out of range");
    return from_micros(std::llround(value * static_cast<double>(kScale)));
  }

  /// Parses `[-]digits[.digits]`; digits past the sixth fractional place are
  /// rounded half away from zero.
  static Decimal parse(std::string_view text) {
    if (text.empty()) throw ParseError("decimal: empty text");
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '-' || text[0] == '+') {
      negative = text[0] == '-';
      pos = 1;
    }
    const auto dot = text.find('.', pos);
    const auto int_part = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    const auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw ParseError("decimal: no digits in '" + std::string(text) + "'");
    if (int_part.size() > 13) throw ParseError("decimal: value out of range '" + std::string(text) + "'");
    std::int64_t units = 0;
    for (char c : int_part) {
      if (c < '0' || c > '9') throw ParseError("decimal: bad character in '" + std::string(text) + "'");
      units = units * 10 + (c - '0');
    }
    std::int64_t frac = 0;
    int taken = 0;
    bool round_up = false;
    for (std::size_t i = 0; i < frac_part.size(); ++i) {
      const char c = frac_part[i];
      if (c < '0' || c > '9') throw ParseError("decimal: bad character in '" + std::string(text) + "'");
      if (taken < kDigits) {
        frac = frac * 10 + (c - '0');
        ++taken;
      } else if (i == static_cast<std::size_t>(kDigits)) {
        round_up = c >= '5';
      }
    }
    for (; taken < kDigits; ++taken) frac *= 10;
    std::int64_t micros = units * kScale + frac + (round_up ? 1 : 0);
    return from_micros(negative ? -micros : micros);
  }

  constexpr std::int64_t micros() const { return micros_; }
  constexpr double to_double() const { return static_cast<double>(micros_) / static_cast<double>(kScale); }
  constexpr bool is_zero() const { return micros_ == 0; }
  constexpr bool is_positive() const { return micros_ > 0; }
  constexpr bool is_negative() const { return micros_ < 0; }

  /// Canonical text: no exponent, trailing fractional zeros trimmed.
  std::string to_string() const {
    const bool negative = micros_ < 0;
    const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(micros_ + 1)) + 1 : static_cast<std::uint64_t>(micros_);
    std::string out = negative ? "-" : "";
    out += std::to_string(mag / kScale);
    std::uint64_t frac = mag % kScale;
    if (frac != 0) {
      std::string digits = std::to_string(frac);
      digits.insert(0, kDigits - digits.size(), '0');
      while (!digits.empty() && digits.back() == '0') digits.pop_back();
      out += '.';
      out += digits;
    }
    return out;
  }

  /// Product rounded half away from zero to six fractional digits.
  constexpr Decimal operator*(Decimal rhs) const {
    const __int128 raw = static_cast<__int128>(micros_) * rhs.micros_;
    const __int128 half = kScale / 2;
    const __int128 q = raw >= 0 ? (raw + half) / kScale : (raw - half) / kScale;
    return from_micros(static_cast<std::int64_t>(q));
  }

  constexpr Decimal operator+(Decimal rhs) const { return from_micros(micros_ + rhs.micros_); }
  constexpr Decimal operator-(Decimal rhs) const { return from_micros(micros_ - rhs.micros_); }
  constexpr Decimal& operator+=(Decimal rhs) {
    micros_ += rhs.micros_;
    return *this;
  }

  constexpr auto operator<=>(const Decimal&) const = default;

 private:
  std::int64_t micros_ = 0;
};

}  // namespace metaland
