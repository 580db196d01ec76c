#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "metaland/analytics/aggregate.hpp"
#include "metaland/core/types.hpp"

namespace metaland {

enum class ShareKey { exchange, currency };

/// Fraction of USD volume per exchange or currency.
inline std::map<std::string, double> share_breakdown(std::span<const Trade> trades, ShareKey key) {
  std::map<std::string, Decimal> volume;
  Decimal total;
  for (const auto& t : trades) {
    volume[key == ShareKey::exchange ? t.exchange : t.currency] += t.amount_usd;
    total += t.amount_usd;
  }
  std::map<std::string, double> out;
  if (!total.is_positive()) return out;
  for (const auto& [k, v] : volume)
    out[k] = static_cast<double>(v.micros()) / static_cast<double>(total.micros());
  return out;
}

struct WethRatio {
  Series series;                   // one point per period, dated at period start
  std::vector<std::string> gaps;   // periods whose non-WETH volume is zero
};

/// Per period: USD volume in WETH divided by USD volume in every other currency.
inline WethRatio weth_ratio(std::span<const Trade> trades, Granularity granularity) {
  std::map<Day, std::pair<Decimal, Decimal>> volume;  // (weth, other)
  for (const auto& t : trades) {
    auto& v = volume[period_start(day_of(t.timestamp), granularity)];
    (t.currency == "WETH" ? v.first : v.second) += t.amount_usd;
  }
  std::vector<SeriesPoint> points;
  WethRatio out;
  for (const auto& [day, v] : volume) {
    if (!v.second.is_positive()) {
      out.gaps.push_back(period_label(day, granularity));
      continue;
    }
    points.push_back({day, static_cast<double>(v.first.micros()) / static_cast<double>(v.second.micros())});
  }
  out.series = Series("weth_ratio", std::move(points));
  return out;
}

/// Number of trades per token. Tokens never traded are absent.
inline std::map<TokenId, std::size_t> flip_counts(std::span<const Trade> trades, bool include_non_economic = false) {
  std::map<TokenId, std::size_t> out;
  for (const auto& t : trades)
    if (t.economic || include_non_economic) ++out[t.token_id];
  return out;
}

}  // namespace metaland
