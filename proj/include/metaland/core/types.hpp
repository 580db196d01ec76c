#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "metaland/core/date.hpp"
#include "metaland/core/decimal.hpp"
#include "metaland/core/error.hpp"
#include "metaland/core/platform.hpp"

namespace metaland {

using TokenId = std::uint64_t;

struct FixedSquare {
  double side_m = 0.0;
  bool operator==(const FixedSquare&) const = default;
};

struct VoxelsBox {
  double area_m2 = 0.0;
  double height_m = 0.0;
  bool operator==(const VoxelsBox&) const = default;
};

struct SomniumPlot {
  SomniumClass size_class = SomniumClass::S;
  double volume_m3 = 0.0;
  bool operator==(const SomniumPlot&) const = default;
};

struct OthersideTraits {
  std::string sediment;
  std::string artifact;
  bool has_koda = false;
  bool operator==(const OthersideTraits&) const = default;
};

using ParcelGeometry = std::variant<FixedSquare, VoxelsBox, SomniumPlot, OthersideTraits>;

inline GeometryKind geometry_kind(const ParcelGeometry& g) {
  return static_cast<GeometryKind>(g.index());
}

struct Parcel {
  PlatformId platform = PlatformId::sandbox;
  TokenId token_id = 0;
  int x = 0;
  int y = 0;
  ParcelGeometry geometry;
  std::optional<std::string> estate_id;
  std::optional<double> distance_to_nearest_poi;
  /// Metadata traits with no mapping in the platform profile.
  std::map<std::string, std::string> extra_attributes;

  bool operator==(const Parcel&) const = default;
};

struct Estate {
  PlatformId platform = PlatformId::sandbox;
  std::string estate_id;
  std::vector<TokenId> member_parcels;  // sorted, unique

  bool operator==(const Estate&) const = default;
};

struct Trade {
  PlatformId platform = PlatformId::sandbox;
  TokenId token_id = 0;
  Timestamp timestamp{};
  Chain chain = Chain::ethereum;
  std::string exchange;
  std::string currency;
  Decimal amount_crypto;
  Decimal amount_usd;
  std::string buyer;
  std::string seller;
  bool economic = false;

  bool operator==(const Trade&) const = default;
};

struct Listing {
  PlatformId platform = PlatformId::sandbox;
  TokenId token_id = 0;
  std::string exchange;
  std::string price_currency;
  Decimal price_amount;
  Decimal price_usd;
  Day observed_date{};

  bool operator==(const Listing&) const = default;
};

struct TrafficSample {
  PlatformId platform = PlatformId::sandbox;
  TokenId token_id = 0;
  Timestamp period_start{};
  TrafficMetric metric = TrafficMetric::hourly_max_concurrent;
  Audience audience = Audience::all;
  std::uint64_t count = 0;

  bool operator==(const TrafficSample&) const = default;
};

struct SocialSignal {
  Day date{};
  SignalSource source = SignalSource::twitter_platform;
  std::optional<PlatformId> platform;
  double value = 0.0;

  bool operator==(const SocialSignal&) const = default;
};

struct FxQuote {
  Day date{};
  std::string currency;
  Decimal usd_rate;

  bool operator==(const FxQuote&) const = default;
};

struct SeriesPoint {
  Day date{};
  double value = 0.0;
  bool operator==(const SeriesPoint&) const = default;
};

/// Named daily series; dates strictly increasing.
class Series {
 public:
  Series() = default;
  Series(std::string name, std::vector<SeriesPoint> points) : name_(std::move(name)), points_(std::move(points)) {
    for (std::size_t i = 1; i < points_.size(); ++i)
      if (!(points_[i - 1].date < points_[i].date))
        throw InvalidArgument("series '" + name_ + "': dates must be strictly increasing");
  }

  const std::string& name() const { return name_; }
  const std::vector<SeriesPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  bool operator==(const Series&) const = default;

 private:
  std::string name_;
  std::vector<SeriesPoint> points_;
};

/// Every record collection of one platform.
struct Dataset {
  PlatformId platform = PlatformId::sandbox;
  std::vector<Parcel> parcels;
  std::vector<Estate> estates;
  std::vector<Trade> trades;
  std::vector<Listing> listings;
  std::vector<TrafficSample> traffic;
  std::vector<SocialSignal> signals;
  std::vector<FxQuote> quotes;

  bool operator==(const Dataset&) const = default;
};

/// Groups parcels by their `estate_id` into estates (members sorted).
inline std::vector<Estate> derive_estates(PlatformId platform, const std::vector<Parcel>& parcels) {
  std::map<std::string, std::vector<TokenId>> groups;
  for (const auto& p : parcels)
    if (p.estate_id) groups[*p.estate_id].push_back(p.token_id);
  std::vector<Estate> out;
  for (auto& [id, members] : groups) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    out.push_back({platform, id, std::move(members)});
  }
  return out;
}

}  // namespace metaland
