#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "metaland/core/types.hpp"

namespace metaland {

enum class Granularity { day, week, month };
enum class GroupBy { none, exchange, currency };

namespace detail {
inline constexpr EnumNames<Granularity, 3> kGranularityNames{
    {{Granularity::day, "day"}, {Granularity::week, "week"}, {Granularity::month, "month"}}};
inline constexpr EnumNames<GroupBy, 3> kGroupByNames{
    {{GroupBy::none, "none"}, {GroupBy::exchange, "exchange"}, {GroupBy::currency, "currency"}}};
}  // namespace detail

constexpr std::string_view to_string(Granularity g) { return detail::enum_to_string(detail::kGranularityNames, g); }
constexpr std::string_view to_string(GroupBy g) { return detail::enum_to_string(detail::kGroupByNames, g); }
inline Granularity parse_granularity(std::string_view s) { return detail::enum_from_string(detail::kGranularityNames, s, "granularity"); }
inline GroupBy parse_group_by(std::string_view s) { return detail::enum_from_string(detail::kGroupByNames, s, "group_by"); }

inline constexpr std::array<Granularity, 3> kAllGranularities{Granularity::day, Granularity::week, Granularity::month};
inline constexpr std::array<GroupBy, 3> kAllGroupings{GroupBy::none, GroupBy::exchange, GroupBy::currency};

/// First day of the period containing `day` (ISO weeks, calendar months, UTC).
inline Day period_start(Day day, Granularity g) {
  switch (g) {
    case Granularity::day: return day;
    case Granularity::week: return iso_week_start(day);
    case Granularity::month: return month_start(day);
  }
  return day;
}

inline std::string period_label(Day start, Granularity g) {
  switch (g) {
    case Granularity::day: return format_day(start);
    case Granularity::week: return iso_week_label(start);
    case Granularity::month: return month_label(start);
  }
  return format_day(start);
}

struct AggregateRow {
  PlatformId platform = PlatformId::sandbox;
  Granularity granularity = Granularity::day;
  Day period_start{};
  std::string period;
  std::optional<std::string> group;
  double avg_price_usd = 0.0;
  Decimal volume_usd;
  std::size_t tx_count = 0;

  bool operator==(const AggregateRow&) const = default;
};

/// One row per (period, group) with at least one trade, ordered by period
/// then group. avg_price_usd = volume_usd / tx_count.
inline std::vector<AggregateRow> aggregate(std::span<const Trade> trades, Granularity granularity,
                                           GroupBy group_by = GroupBy::none) {
  struct Acc {
    Decimal volume;
    std::size_t count = 0;
    PlatformId platform{};
  };
  std::map<std::pair<Day, std::string>, Acc> acc;
  for (const auto& t : trades) {
    std::string key;
    if (group_by == GroupBy::exchange) key = t.exchange;
    if (group_by == GroupBy::currency) key = t.currency;
    auto& a = acc[{period_start(day_of(t.timestamp), granularity), key}];
    a.volume += t.amount_usd;
    ++a.count;
    a.platform = t.platform;
  }
  std::vector<AggregateRow> rows;
  rows.reserve(acc.size());
  for (const auto& [k, a] : acc) {
    AggregateRow r;
    r.platform = a.platform;
    r.granularity = granularity;
    r.period_start = k.first;
    r.period = period_label(k.first, granularity);
    if (group_by != GroupBy::none) r.group = k.second;
    r.volume_usd = a.volume;
    r.tx_count = a.count;
    r.avg_price_usd = a.volume.to_double() / static_cast<double>(a.count);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace metaland
