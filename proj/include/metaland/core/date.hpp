#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "metaland/core/error.hpp"

namespace metaland {

using Day = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

namespace detail {

inline int parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view what) {
  if (pos + len > text.size()) throw ParseError(std::string(what) + ": truncated '" + std::string(text) + "'");
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') throw ParseError(std::string(what) + ": bad digit in '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

inline void expect_char(std::string_view text, std::size_t pos, char c, std::string_view what) {
  if (pos >= text.size() || text[pos] != c) throw ParseError(std::string(what) + ": malformed '" + std::string(text) + "'");
}

}  // namespace detail

/// Parses a `YYYY-MM-DD` calendar day.
inline Day parse_day(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 10) throw ParseError("date: expected YYYY-MM-DD, got '" + std::string(text) + "'");
  const int y = detail::parse_fixed_int(text, 0, 4, "date");
  detail::expect_char(text, 4, '-', "date");
  const int m = detail::parse_fixed_int(text, 5, 2, "date");
  detail::expect_char(text, 7, '-', "date");
  const int d = detail::parse_fixed_int(text, 8, 2, "date");
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ParseError("date: invalid calendar day '" + std::string(text) + "'");
  return sys_days{ymd};
}

/// Parses an ISO-8601 UTC instant `YYYY-MM-DDTHH:MM:SS[.fff](Z|+00:00)`.
/// Fractional seconds are truncated.
inline Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  if (text.size() < 20) throw ParseError("timestamp: too short '" + std::string(text) + "'");
  const Day day = parse_day(text.substr(0, 10));
  if (text[10] != 'T' && text[10] != ' ') throw ParseError("timestamp: malformed '" + std::string(text) + "'");
  const int hh = detail::parse_fixed_int(text, 11, 2, "timestamp");
  detail::expect_char(text, 13, ':', "timestamp");
  const int mm = detail::parse_fixed_int(text, 14, 2, "timestamp");
  detail::expect_char(text, 16, ':', "timestamp");
  const int ss = detail::parse_fixed_int(text, 17, 2, "timestamp");
  if (hh > 23 || mm > 59 || ss > 60) throw ParseError("timestamp: field out of range '" + std::string(text) + "'");
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  const auto zone = text.substr(pos);
  if (zone != "Z" && zone != "+00:00") throw ParseError("timestamp: only UTC is accepted, got '" + std::string(text) + "'");
  return time_point_cast<seconds>(day) + hours{hh} + minutes{mm} + seconds{ss};
}

inline std::string format_day(Day day) {
  using namespace std::chrono;
  const year_month_day ymd{day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

inline std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day = floor<days>(ts);
  const hh_mm_ss tod{ts - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()), static_cast<int>(tod.seconds().count()));
  return format_day(Day{day}) + buf;
}

inline Day day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

/// Monday = 0 ... Sunday = 6.
inline int iso_weekday_index(Day day) {
  return static_cast<int>(std::chrono::weekday{day}.iso_encoding()) - 1;
}

/// Monday of the ISO week containing `day`.
inline Day iso_week_start(Day day) { return day - std::chrono::days{iso_weekday_index(day)}; }

/// `YYYY-Www` ISO week label.
inline std::string iso_week_label(Day day) {
  using namespace std::chrono;
  const Day thursday = iso_week_start(day) + days{3};
  const year iso_year = year_month_day{thursday}.year();
  const Day jan1 = sys_days{iso_year / January / 1};
  const int week = static_cast<int>((thursday - jan1).count() / 7) + 1;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-W%02d", static_cast<int>(iso_year), week);
  return buf;
}

inline Day month_start(Day day) {
  using namespace std::chrono;
  const year_month_day ymd{day};
  return sys_days{ymd.year() / ymd.month() / 1};
}

inline std::string month_label(Day day) { return format_day(month_start(day)).substr(0, 7); }

inline long days_between(Day from, Day to) { return (to - from).count(); }

}  // namespace metaland
