#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metaland/analytics/seasonal.hpp"
#include "metaland/analytics/spearman.hpp"
#include "metaland/core/types.hpp"

namespace metaland {

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<double>>> values;  // square, symmetric
  std::vector<std::string> undefined;                       // series with no defined correlations

  std::optional<double> at(std::string_view a, std::string_view b) const {
    std::size_t ia = names.size(), ib = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == a) ia = i;
      if (names[i] == b) ib = i;
    }
    if (ia == names.size() || ib == names.size()) throw InvalidArgument("correlation: unknown series");
    return values[ia][ib];
  }

  bool operator==(const CorrelationMatrix&) const = default;
};

/// Daily avg price, volume and transaction count over the contiguous day
/// range spanned by `trades`. Days without trades have zero volume and count
/// and no avg-price point.
inline std::vector<Series> daily_trade_series(std::span<const Trade> trades) {
  std::map<Day, std::pair<Decimal, std::size_t>> by_day;
  for (const auto& t : trades) {
    auto& v = by_day[day_of(t.timestamp)];
    v.first += t.amount_usd;
    ++v.second;
  }
  std::vector<SeriesPoint> avg, volume, count;
  if (!by_day.empty()) {
    for (Day d = by_day.begin()->first; d <= by_day.rbegin()->first; d += std::chrono::days{1}) {
      auto it = by_day.find(d);
      if (it == by_day.end()) {
        volume.push_back({d, 0.0});
        count.push_back({d, 0.0});
        continue;
      }
      const double vol = it->second.first.to_double();
      avg.push_back({d, vol / static_cast<double>(it->second.second)});
      volume.push_back({d, vol});
      count.push_back({d, static_cast<double>(it->second.second)});
    }
  }
  return {Series("avg_price", std::move(avg)), Series("volume", std::move(volume)), Series("tx_count", std::move(count))};
}

inline Series signal_series(std::span<const SocialSignal> signals, SignalSource source, std::optional<PlatformId> platform,
                            std::string name) {
  std::map<Day, double> values;
  for (const auto& s : signals)
    if (s.source == source && (source != SignalSource::twitter_platform || s.platform == platform)) values[s.date] = s.value;
  std::vector<SeriesPoint> pts;
  for (const auto& [d, v] : values) pts.push_back({d, v});
  return Series(std::move(name), std::move(pts));
}

inline Series quote_series(std::span<const FxQuote> quotes, std::string_view currency, std::string name) {
  std::map<Day, double> values;
  for (const auto& q : quotes)
    if (q.currency == currency) values[q.date] = q.usd_rate.to_double();
  std::vector<SeriesPoint> pts;
  for (const auto& [d, v] : values) pts.push_back({d, v});
  return Series(std::move(name), std::move(pts));
}

/// Pairwise Spearman coefficients of the deseasonalised inputs. A series that
/// cannot be deseasonalised or is constant afterwards gets an undefined
/// row/column; pairs sharing fewer than 3 dates are undefined.
inline CorrelationMatrix correlation_matrix(const std::vector<Series>& series, int period = 7) {
  const std::size_t n = series.size();
  CorrelationMatrix m;
  m.values.assign(n, std::vector<std::optional<double>>(n));
  std::vector<std::optional<Series>> adjusted(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.names.push_back(series[i].name());
    try {
      Series s = deseasonalize(series[i], period).series;
      const auto& pts = s.points();
      const bool constant = std::all_of(pts.begin(), pts.end(), [&](const SeriesPoint& p) { return p.value == pts.front().value; });
      if (!constant) adjusted[i] = std::move(s);
    } catch (const DataError&) {
    }
    if (!adjusted[i]) m.undefined.push_back(series[i].name());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!adjusted[i]) continue;
    m.values[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!adjusted[j]) continue;
      std::optional<double> r;
      try {
        r = spearman(*adjusted[i], *adjusted[j]);
      } catch (const DataError&) {
      }
      m.values[i][j] = m.values[j][i] = r;
    }
  }
  return m;
}

/// Series correlated per platform: trade aggregates, social signals and
/// FX quotes (platform token omitted when the platform has none).
inline std::vector<Series> platform_correlation_series(const Dataset& ds, std::span<const Trade> kept_trades) {
  std::vector<Series> out = daily_trade_series(kept_trades);
  out.push_back(signal_series(ds.signals, SignalSource::twitter_platform, ds.platform, "tweets_platform"));
  out.push_back(signal_series(ds.signals, SignalSource::twitter_metaverse_hashtag, std::nullopt, "tweets_metaverse"));
  out.push_back(signal_series(ds.signals, SignalSource::google_trend_metaverse, std::nullopt, "google_trend"));
  out.push_back(quote_series(ds.quotes, "ETH", "eth_usd"));
  if (const auto token = profile(ds.platform).token_currency) out.push_back(quote_series(ds.quotes, *token, "token_usd"));
  return out;
}

inline CorrelationMatrix correlation_matrix(const Dataset& ds, std::span<const Trade> kept_trades) {
  return correlation_matrix(platform_correlation_series(ds, kept_trades));
}

}  // namespace metaland
