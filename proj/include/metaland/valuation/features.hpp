#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <vector>

#include "metaland/core/types.hpp"
#include "metaland/ingest/parse.hpp"
#include "metaland/valuation/schema.hpp"

namespace metaland {

struct TrainingExample {
  std::vector<double> features;
  double target = 0.0;
  double weight = 1.0;

  bool operator==(const TrainingExample&) const = default;
};

/// Value used for any feature whose source has no data.
inline constexpr double kMissingFeature = -1.0;

/// Lookup tables joining a platform dataset onto (parcel, day) feature rows.
/// Holds a reference to the dataset, which must outlive the context.
class FeatureContext {
 public:
  /// `market_trades` feed the daily price aggregates (usually the filtered
  /// economic trades).
  FeatureContext(const Dataset& ds, std::span<const Trade> market_trades) : ds_(ds), quotes_(ds.quotes) {
    for (const auto& p : ds.parcels) parcels_.emplace(p.token_id, &p);
    for (const auto& e : ds.estates) estate_size_[e.estate_id] = e.member_parcels.size();
    for (const auto& t : market_trades) {
      auto& d = daily_[day_of(t.timestamp)];
      d.first += t.amount_usd;
      ++d.second;
    }
    if (!daily_.empty()) {
      start_ = daily_.begin()->first;
      last_ = daily_.rbegin()->first;
    } else if (!ds.quotes.empty()) {
      start_ = last_ = ds.quotes.front().date;
    }
    for (const auto& s : ds.signals)
      if (s.source != SignalSource::twitter_platform || s.platform == ds.platform) signals_[{s.date, s.source}] = s.value;
    for (const auto& s : ds.traffic) traffic_[s.token_id].push_back({day_of(s.period_start), s.audience, s.count});
    for (auto& [token, samples] : traffic_)
      std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.day < b.day; });
    for (const auto& l : ds.listings) {
      auto& d = listings_[l.observed_date];
      d.first = d.second == 0 ? l.price_usd : std::min(d.first, l.price_usd);
      ++d.second;
    }
  }

  const Dataset& dataset() const { return ds_; }
  Day first_day() const { return start_; }
  /// Latest day with market trades; the reference date for "current" features.
  Day last_day() const { return last_; }

  const Parcel& parcel(TokenId token) const {
    auto it = parcels_.find(token);
    if (it == parcels_.end()) throw DataError("unknown parcel token " + std::to_string(token));
    return *it->second;
  }

  /// Feature row of `parcel` as of `day`.
  std::vector<double> features_at(const Parcel& parcel, Day day, const FeatureSchema& schema) const {
    if (schema.platform != ds_.platform) throw InvalidArgument("feature schema belongs to another platform");
    std::vector<double> row;
    row.reserve(schema.size());
    for (const auto& f : schema.features) row.push_back(value(f.name, parcel, day));
    return row;
  }

  /// Sum of traffic counts for `token` over the `window` days ending at `day`.
  double traffic_sum(TokenId token, Day day, int window, std::optional<Audience> audience = std::nullopt) const {
    auto it = traffic_.find(token);
    if (it == traffic_.end()) return 0.0;
    const Day from = day - std::chrono::days{window - 1};
    double sum = 0.0;
    const auto& samples = it->second;
    auto lo = std::lower_bound(samples.begin(), samples.end(), from, [](const auto& s, Day d) { return s.day < d; });
    for (; lo != samples.end() && lo->day <= day; ++lo)
      if (!audience || lo->audience == *audience) sum += static_cast<double>(lo->count);
    return sum;
  }

 private:
  struct Visit {
    Day day;
    Audience audience;
    std::uint64_t count;
  };

  double signal(Day day, SignalSource source) const {
    auto it = signals_.find({day, source});
    return it == signals_.end() ? kMissingFeature : it->second;
  }

  double quote(Day day, std::string_view currency) const {
    const auto r = quotes_.rate(day, currency);
    return r ? r->to_double() : kMissingFeature;
  }

  double value(std::string_view name, const Parcel& p, Day day) const {
    using std::chrono::days;
    const PlatformProfile& prof = profile(ds_.platform);
    if (name == "x") return p.x;
    if (name == "y") return p.y;
    if (name == "poi_distance") return p.distance_to_nearest_poi.value_or(kMissingFeature);
    if (name == "estate_size") {
      if (!p.estate_id) return 1.0;
      auto it = estate_size_.find(*p.estate_id);
      return it == estate_size_.end() ? 1.0 : static_cast<double>(it->second);
    }
    if (name == "area" || name == "height" || name == "build_volume") {
      const auto* box = std::get_if<VoxelsBox>(&p.geometry);
      if (!box) return kMissingFeature;
      return name == "area" ? box->area_m2 : (name == "height" ? box->height_m : box->area_m2 * box->height_m);
    }
    if (name == "volume") {
      const auto* som = std::get_if<SomniumPlot>(&p.geometry);
      return som ? som->volume_m3 : kMissingFeature;
    }
    if (name == "sediment" || name == "artifact" || name == "has_koda") {
      const auto* os = std::get_if<OthersideTraits>(&p.geometry);
      if (!os) return kMissingFeature;
      if (name == "has_koda") return os->has_koda ? 1.0 : 0.0;
      const auto labels = name == "sediment" ? prof.sediment_labels : prof.artifact_labels;
      const auto& label = name == "sediment" ? os->sediment : os->artifact;
      const auto it = std::find(labels.begin(), labels.end(), label);
      return it == labels.end() ? kMissingFeature : static_cast<double>(it - labels.begin());
    }
    if (name == "prior_day_avg_price" || name == "prior_day_tx_count" || name == "prior_day_volume_usd") {
      auto it = daily_.find(day - days{1});
      if (name == "prior_day_avg_price")
        return it == daily_.end() ? kMissingFeature : it->second.first.to_double() / static_cast<double>(it->second.second);
      if (it == daily_.end()) return 0.0;
      return name == "prior_day_tx_count" ? static_cast<double>(it->second.second) : it->second.first.to_double();
    }
    if (name == "prior_week_avg_price") {
      Decimal vol;
      std::size_t n = 0;
      for (auto it = daily_.lower_bound(day - days{7}); it != daily_.end() && it->first < day; ++it) {
        vol += it->second.first;
        n += it->second.second;
      }
      return n == 0 ? kMissingFeature : vol.to_double() / static_cast<double>(n);
    }
    if (name == "eth_usd") return quote(day, "ETH");
    if (name == "token_usd") return prof.token_currency ? quote(day, *prof.token_currency) : kMissingFeature;
    if (name == "tweets_platform") return signal(day, SignalSource::twitter_platform);
    if (name == "tweets_metaverse") return signal(day, SignalSource::twitter_metaverse_hashtag);
    if (name == "google_trend") return signal(day, SignalSource::google_trend_metaverse);
    if (name == "traffic_7d") return traffic_sum(p.token_id, day, 7);
    if (name == "traffic_30d") return traffic_sum(p.token_id, day, 30);
    if (name == "traffic_players_7d") return traffic_sum(p.token_id, day, 7, Audience::players);
    if (name == "traffic_spectators_7d") return traffic_sum(p.token_id, day, 7, Audience::spectators);
    if (name == "traffic_present") {
      auto it = traffic_.find(p.token_id);
      return it != traffic_.end() && !it->second.empty() && it->second.front().day <= day ? 1.0 : 0.0;
    }
    if (name == "floor_price_usd" || name == "listed_count") {
      auto it = listings_.find(day);
      if (name == "listed_count") return it == listings_.end() ? 0.0 : static_cast<double>(it->second.second);
      return it == listings_.end() ? kMissingFeature : it->second.first.to_double();
    }
    if (name == "day_of_week") return iso_weekday_index(day);
    if (name == "days_since_start") return static_cast<double>(days_between(start_, day));
    throw InvalidArgument("feature '" + std::string(name) + "' has no extractor");
  }

  const Dataset& ds_;
  QuoteBook quotes_;
  std::map<TokenId, const Parcel*> parcels_;
  std::map<std::string, std::size_t> estate_size_;
  std::map<Day, std::pair<Decimal, std::size_t>> daily_;
  std::map<std::pair<Day, SignalSource>, double> signals_;
  std::map<TokenId, std::vector<Visit>> traffic_;
  std::map<Day, std::pair<Decimal, std::size_t>> listings_;
  Day start_{};
  Day last_{};
};

/// Feature row and USD target for one trade.
inline TrainingExample assemble_features(const Trade& trade, const FeatureContext& ctx, const FeatureSchema& schema) {
  if (trade.platform != ctx.dataset().platform) throw InvalidArgument("trade belongs to another platform");
  const Parcel& parcel = ctx.parcel(trade.token_id);
  return {ctx.features_at(parcel, day_of(trade.timestamp), schema), trade.amount_usd.to_double(), 1.0};
}

inline std::vector<TrainingExample> assemble_all(std::span<const Trade> trades, const FeatureContext& ctx,
                                                 const FeatureSchema& schema) {
  std::vector<TrainingExample> out;
  out.reserve(trades.size());
  for (const auto& t : trades) out.push_back(assemble_features(t, ctx, schema));
  return out;
}

}  // namespace metaland
