#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "metaland/core/enum_names.hpp"

namespace metaland {

enum class PlatformId { sandbox, decentraland, voxels, somnium, otherside };

inline constexpr std::array<PlatformId, 5> kAllPlatforms{PlatformId::sandbox, PlatformId::decentraland,
                                                         PlatformId::voxels, PlatformId::somnium,
                                                         PlatformId::otherside};

enum class Chain { ethereum, polygon };
enum class TrafficMetric { hourly_max_concurrent, daily_cumulative_unique };
enum class Audience { all, spectators, players };
enum class SignalSource { twitter_platform, twitter_metaverse_hashtag, google_trend_metaverse };
enum class SomniumClass { S, M, XL };
enum class GeometryKind { fixed_square, voxels_box, somnium_class, otherside_traits };

namespace detail {
inline constexpr EnumNames<PlatformId, 5> kPlatformNames{{{PlatformId::sandbox, "sandbox"},
                                                          {PlatformId::decentraland, "decentraland"},
                                                          {PlatformId::voxels, "voxels"},
                                                          {PlatformId::somnium, "somnium"},
                                                          {PlatformId::otherside, "otherside"}}};
inline constexpr EnumNames<Chain, 2> kChainNames{{{Chain::ethereum, "ethereum"}, {Chain::polygon, "polygon"}}};
inline constexpr EnumNames<TrafficMetric, 2> kMetricNames{
    {{TrafficMetric::hourly_max_concurrent, "hourly_max_concurrent"},
     {TrafficMetric::daily_cumulative_unique, "daily_cumulative_unique"}}};
inline constexpr EnumNames<Audience, 3> kAudienceNames{
    {{Audience::all, "all"}, {Audience::spectators, "spectators"}, {Audience::players, "players"}}};
inline constexpr EnumNames<SignalSource, 3> kSourceNames{
    {{SignalSource::twitter_platform, "twitter_platform"},
     {SignalSource::twitter_metaverse_hashtag, "twitter_metaverse_hashtag"},
     {SignalSource::google_trend_metaverse, "google_trend_metaverse"}}};
inline constexpr EnumNames<SomniumClass, 3> kSomniumClassNames{
    {{SomniumClass::S, "S"}, {SomniumClass::M, "M"}, {SomniumClass::XL, "XL"}}};
inline constexpr EnumNames<GeometryKind, 4> kGeometryKindNames{{{GeometryKind::fixed_square, "fixed_square"},
                                                                {GeometryKind::voxels_box, "voxels_box"},
                                                                {GeometryKind::somnium_class, "somnium_class"},
                                                                {GeometryKind::otherside_traits, "otherside_traits"}}};
}  // namespace detail

constexpr std::string_view to_string(PlatformId v) { return detail::enum_to_string(detail::kPlatformNames, v); }
constexpr std::string_view to_string(Chain v) { return detail::enum_to_string(detail::kChainNames, v); }
constexpr std::string_view to_string(TrafficMetric v) { return detail::enum_to_string(detail::kMetricNames, v); }
constexpr std::string_view to_string(Audience v) { return detail::enum_to_string(detail::kAudienceNames, v); }
constexpr std::string_view to_string(SignalSource v) { return detail::enum_to_string(detail::kSourceNames, v); }
constexpr std::string_view to_string(SomniumClass v) { return detail::enum_to_string(detail::kSomniumClassNames, v); }
constexpr std::string_view to_string(GeometryKind v) { return detail::enum_to_string(detail::kGeometryKindNames, v); }

inline PlatformId parse_platform(std::string_view s) { return detail::enum_from_string(detail::kPlatformNames, s, "platform"); }
inline Chain parse_chain(std::string_view s) { return detail::enum_from_string(detail::kChainNames, s, "chain"); }
inline TrafficMetric parse_traffic_metric(std::string_view s) { return detail::enum_from_string(detail::kMetricNames, s, "traffic metric"); }
inline Audience parse_audience(std::string_view s) { return detail::enum_from_string(detail::kAudienceNames, s, "audience"); }
inline SignalSource parse_signal_source(std::string_view s) { return detail::enum_from_string(detail::kSourceNames, s, "signal source"); }
inline SomniumClass parse_somnium_class(std::string_view s) { return detail::enum_from_string(detail::kSomniumClassNames, s, "somnium class"); }

// Platform geometry constants. Every other module reads these through the
// profile; none re-declares them.
inline constexpr double kDecentralandParcelSideM = 16.0;
inline constexpr double kSandboxParcelSideM = 96.0;
inline constexpr std::array<int, 4> kSandboxEstateSides{3, 6, 12, 24};

constexpr double somnium_volume_m3(SomniumClass c) {
  switch (c) {
    case SomniumClass::S: return 2000.0;
    case SomniumClass::M: return 15000.0;
    case SomniumClass::XL: return 75000.0;
  }
  return 0.0;
}

/// Metadata trait names used by a platform's ERC721 documents.
struct AttributeNames {
  std::string_view x;
  std::string_view y;
  std::string_view poi_distance;
  std::string_view estate;
  std::string_view area;
  std::string_view height;
  std::string_view size_class;
  std::string_view sediment;
  std::string_view artifact;
  std::string_view koda;
};

struct TrafficRule {
  TrafficMetric metric;
  Audience audience;
};

/// Static per-platform configuration.
struct PlatformProfile {
  PlatformId id;
  GeometryKind geometry;
  std::optional<double> fixed_side_m;
  std::span<const int> estate_sides;  // empty: any connected shape
  bool estates_square = false;
  std::optional<std::string_view> token_currency;
  std::span<const TrafficRule> traffic_rules;  // empty: no traffic data
  AttributeNames attributes;
  std::span<const std::string_view> sediment_labels;
  std::span<const std::string_view> artifact_labels;
  std::string_view native_exchange;
  std::span<const std::string_view> default_features;
};

namespace detail {

inline constexpr std::array<TrafficRule, 1> kDecentralandTraffic{{{TrafficMetric::hourly_max_concurrent, Audience::all}}};
inline constexpr std::array<TrafficRule, 1> kVoxelsTraffic{{{TrafficMetric::daily_cumulative_unique, Audience::all}}};
inline constexpr std::array<TrafficRule, 2> kSomniumTraffic{{{TrafficMetric::hourly_max_concurrent, Audience::spectators},
                                                             {TrafficMetric::hourly_max_concurrent, Audience::players}}};

inline constexpr std::array<std::string_view, 5> kSedimentLabels{"Biogenic Swamp", "Chemical Goo", "Rainbow Atmos",
                                                                 "Cosmic Dream", "Infinite Expanse"};
inline constexpr std::array<std::string_view, 4> kArtifactLabels{"None", "Common", "Rare", "Legendary"};

inline constexpr std::array<std::string_view, 8> kSandboxFeatures{
    "x", "y", "poi_distance", "estate_size", "prior_day_avg_price", "eth_usd", "token_usd", "tweets_platform"};
inline constexpr std::array<std::string_view, 11> kDecentralandFeatures{
    "x",       "y",         "poi_distance",    "estate_size",  "prior_day_avg_price", "eth_usd",
    "token_usd", "tweets_platform", "google_trend", "traffic_7d", "traffic_present"};
inline constexpr std::array<std::string_view, 21> kVoxelsFeatures{
    "x",                    "y",           "poi_distance",    "area",            "height",
    "build_volume",         "prior_day_avg_price", "prior_day_tx_count", "prior_day_volume_usd",
    "prior_week_avg_price", "eth_usd",     "tweets_platform", "tweets_metaverse", "google_trend",
    "traffic_7d",           "traffic_30d", "traffic_present", "floor_price_usd", "listed_count",
    "day_of_week",          "days_since_start"};
inline constexpr std::array<std::string_view, 12> kSomniumFeatures{
    "x",               "y",                "volume",       "prior_day_avg_price", "eth_usd",
    "token_usd",       "tweets_platform",  "tweets_metaverse", "google_trend", "traffic_players_7d",
    "traffic_spectators_7d", "traffic_present"};
inline constexpr std::array<std::string_view, 11> kOthersideFeatures{
    "x", "y", "sediment", "artifact", "has_koda", "prior_day_avg_price", "eth_usd", "token_usd",
    "tweets_platform", "tweets_metaverse", "google_trend"};

inline const std::array<PlatformProfile, 5>& profiles() {
  static const std::array<PlatformProfile, 5> table{{
      {.id = PlatformId::sandbox,
       .geometry = GeometryKind::fixed_square,
       .fixed_side_m = kSandboxParcelSideM,
       .estate_sides = kSandboxEstateSides,
       .estates_square = true,
       .token_currency = "SAND",
       .traffic_rules = {},
       .attributes = {.x = "Land X", .y = "Land Y", .poi_distance = "Distance to POI", .estate = "Estate"},
       .native_exchange = "sandbox_marketplace",
       .default_features = kSandboxFeatures},
      {.id = PlatformId::decentraland,
       .geometry = GeometryKind::fixed_square,
       .fixed_side_m = kDecentralandParcelSideM,
       .token_currency = "MANA",
       .traffic_rules = kDecentralandTraffic,
       .attributes = {.x = "X", .y = "Y", .poi_distance = "Distance to Plaza", .estate = "Estate"},
       .native_exchange = "dcl_marketplace",
       .default_features = kDecentralandFeatures},
      {.id = PlatformId::voxels,
       .geometry = GeometryKind::voxels_box,
       .traffic_rules = kVoxelsTraffic,
       .attributes = {.x = "X", .y = "Y", .poi_distance = "Distance to POI", .area = "Area", .height = "Height"},
       .native_exchange = "voxels_marketplace",
       .default_features = kVoxelsFeatures},
      {.id = PlatformId::somnium,
       .geometry = GeometryKind::somnium_class,
       .token_currency = "CUBE",
       .traffic_rules = kSomniumTraffic,
       .attributes = {.x = "X", .y = "Y", .size_class = "Size"},
       .native_exchange = "somnium_marketplace",
       .default_features = kSomniumFeatures},
      {.id = PlatformId::otherside,
       .geometry = GeometryKind::otherside_traits,
       .token_currency = "APE",
       .traffic_rules = {},
       .attributes = {.x = "X", .y = "Y", .sediment = "Sediment", .artifact = "Artifact", .koda = "Koda"},
       .sediment_labels = kSedimentLabels,
       .artifact_labels = kArtifactLabels,
       .native_exchange = "looksrare",
       .default_features = kOthersideFeatures},
  }};
  return table;
}

}  // namespace detail

inline const PlatformProfile& profile(PlatformId id) { return detail::profiles()[static_cast<std::size_t>(id)]; }

inline bool traffic_allowed(PlatformId id, TrafficMetric metric, Audience audience) {
  for (const auto& rule : profile(id).traffic_rules)
    if (rule.metric == metric && rule.audience == audience) return true;
  return false;
}

inline bool has_traffic(PlatformId id) { return !profile(id).traffic_rules.empty(); }

}  // namespace metaland
