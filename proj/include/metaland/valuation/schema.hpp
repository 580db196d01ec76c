#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metaland/core/platform.hpp"
#include "metaland/core/error.hpp"

namespace metaland {

enum class FeatureKind { numeric, categorical };
enum class FeatureSource { parcel, daily_series, traffic_window, listings, calendar };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  FeatureSource source = FeatureSource::parcel;
  std::string group;  // location | geometry | market | social | traffic | listing | calendar

  bool operator==(const FeatureSpec&) const = default;
};

namespace detail {

struct CatalogueEntry {
  std::string_view name;
  FeatureKind kind;
  FeatureSource source;
  std::string_view group;
};

inline constexpr std::array<CatalogueEntry, 29> kFeatureCatalogue{{
    {"x", FeatureKind::numeric, FeatureSource::parcel, "location"},
    {"y", FeatureKind::numeric, FeatureSource::parcel, "location"},
    {"poi_distance", FeatureKind::numeric, FeatureSource::parcel, "location"},
    {"estate_size", FeatureKind::numeric, FeatureSource::parcel, "geometry"},
    {"area", FeatureKind::numeric, FeatureSource::parcel, "geometry"},
    {"height", FeatureKind::numeric, FeatureSource::parcel, "geometry"},
    {"build_volume", FeatureKind::numeric, FeatureSource::parcel, "geometry"},
    {"volume", FeatureKind::numeric, FeatureSource::parcel, "geometry"},
    {"sediment", FeatureKind::categorical, FeatureSource::parcel, "geometry"},
    {"artifact", FeatureKind::categorical, FeatureSource::parcel, "geometry"},
    {"has_koda", FeatureKind::categorical, FeatureSource::parcel, "geometry"},
    {"prior_day_avg_price", FeatureKind::numeric, FeatureSource::daily_series, "market"},
    {"prior_day_tx_count", FeatureKind::numeric, FeatureSource::daily_series, "market"},
    {"prior_day_volume_usd", FeatureKind::numeric, FeatureSource::daily_series, "market"},
    {"prior_week_avg_price", FeatureKind::numeric, FeatureSource::daily_series, "market"},
    {"eth_usd", FeatureKind::numeric, FeatureSource::daily_series, "market"},
    {"token_usd", FeatureKind::numeric, FeatureSource::daily_series, "market"},
    {"tweets_platform", FeatureKind::numeric, FeatureSource::daily_series, "social"},
    {"tweets_metaverse", FeatureKind::numeric, FeatureSource::daily_series, "social"},
    {"google_trend", FeatureKind::numeric, FeatureSource::daily_series, "social"},
    {"traffic_7d", FeatureKind::numeric, FeatureSource::traffic_window, "traffic"},
    {"traffic_30d", FeatureKind::numeric, FeatureSource::traffic_window, "traffic"},
    {"traffic_players_7d", FeatureKind::numeric, FeatureSource::traffic_window, "traffic"},
    {"traffic_spectators_7d", FeatureKind::numeric, FeatureSource::traffic_window, "traffic"},
    {"traffic_present", FeatureKind::categorical, FeatureSource::traffic_window, "traffic"},
    {"floor_price_usd", FeatureKind::numeric, FeatureSource::listings, "listing"},
    {"listed_count", FeatureKind::numeric, FeatureSource::listings, "listing"},
    {"day_of_week", FeatureKind::categorical, FeatureSource::calendar, "calendar"},
    {"days_since_start", FeatureKind::numeric, FeatureSource::calendar, "calendar"},
}};

}  // namespace detail

inline FeatureSpec feature_spec(std::string_view name) {
  for (const auto& e : detail::kFeatureCatalogue)
    if (e.name == name) return {std::string(e.name), e.kind, e.source, std::string(e.group)};
  throw InvalidArgument("unknown feature '" + std::string(name) + "'");
}

/// Ordered feature list a platform's valuation model consumes.
struct FeatureSchema {
  PlatformId platform = PlatformId::sandbox;
  std::vector<FeatureSpec> features;

  std::size_t size() const { return features.size(); }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& f : features) out.push_back(f.name);
    return out;
  }
  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < features.size(); ++i)
      if (features[i].name == name) return i;
    return std::nullopt;
  }

  bool operator==(const FeatureSchema&) const = default;
};

template <typename Names>
FeatureSchema make_schema(PlatformId platform, const Names& names) {
  FeatureSchema s{platform, {}};
  for (const auto& n : names) {
    if (s.index_of(n)) throw InvalidArgument("duplicate feature '" + std::string(n) + "'");
    s.features.push_back(feature_spec(n));
  }
  if (s.features.empty()) throw InvalidArgument("feature schema must not be empty");
  return s;
}

/// The profile's default feature list.
inline FeatureSchema default_schema(PlatformId platform) { return make_schema(platform, profile(platform).default_features); }

}  // namespace metaland
