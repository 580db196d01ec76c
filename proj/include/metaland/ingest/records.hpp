#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "metaland/core/types.hpp"
#include "metaland/ingest/json_fields.hpp"

namespace metaland {

// Canonical JSON form of every record type. Field names follow the record
// type fields exactly; decimals are strings, days are YYYY-MM-DD, instants are
// ISO-8601 UTC with a trailing Z.

using json = nlohmann::json;

inline json geometry_to_json(const ParcelGeometry& g) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FixedSquare>) return {{"kind", "fixed_square"}, {"side", v.side_m}};
        if constexpr (std::is_same_v<T, VoxelsBox>)
          return {{"kind", "voxels_box"}, {"area", v.area_m2}, {"height", v.height_m}};
        if constexpr (std::is_same_v<T, SomniumPlot>)
          return {{"kind", "somnium_class"}, {"class", to_string(v.size_class)}, {"volume", v.volume_m3}};
        if constexpr (std::is_same_v<T, OthersideTraits>)
          return {{"kind", "otherside_traits"}, {"sediment", v.sediment}, {"artifact", v.artifact}, {"has_koda", v.has_koda}};
      },
      g);
}

inline ParcelGeometry geometry_from_json(const json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "geometry";
  const auto kind = get_string(j, "kind", ctx);
  if (kind == "fixed_square") return FixedSquare{get_double(j, "side", ctx)};
  if (kind == "voxels_box") return VoxelsBox{get_double(j, "area", ctx), get_double(j, "height", ctx)};
  if (kind == "somnium_class")
    return SomniumPlot{parse_somnium_class(get_string(j, "class", ctx)), get_double(j, "volume", ctx)};
  if (kind == "otherside_traits")
    return OthersideTraits{get_string(j, "sediment", ctx), get_string(j, "artifact", ctx), get_bool(j, "has_koda", ctx)};
  throw ParseError("geometry: unknown kind '" + kind + "'");
}

inline json to_json(const Parcel& p) {
  json j{{"platform", to_string(p.platform)},
         {"token_id", p.token_id},
         {"x", p.x},
         {"y", p.y},
         {"geometry", geometry_to_json(p.geometry)},
         {"estate_id", p.estate_id ? json(*p.estate_id) : json(nullptr)},
         {"distance_to_nearest_poi", p.distance_to_nearest_poi ? json(*p.distance_to_nearest_poi) : json(nullptr)}};
  if (!p.extra_attributes.empty()) j["extra_attributes"] = p.extra_attributes;
  return j;
}

inline Parcel parcel_from_json(const json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "parcel";
  Parcel p;
  p.platform = parse_platform(get_string(j, "platform", ctx));
  p.token_id = get_uint(j, "token_id", ctx);
  p.x = static_cast<int>(get_int(j, "x", ctx));
  p.y = static_cast<int>(get_int(j, "y", ctx));
  p.geometry = geometry_from_json(require(j, "geometry", ctx));
  if (has(j, "estate_id")) p.estate_id = get_string(j, "estate_id", ctx);
  if (has(j, "distance_to_nearest_poi")) p.distance_to_nearest_poi = get_double(j, "distance_to_nearest_poi", ctx);
  if (has(j, "extra_attributes")) {
    const json& extra = j["extra_attributes"];
    if (!extra.is_object()) throw ParseError("parcel: extra_attributes must be an object");
    for (const auto& [k, v] : extra.items()) {
      if (!v.is_string()) throw ParseError("parcel: extra attribute values must be strings");
      p.extra_attributes.emplace(k, v.get<std::string>());
    }
  }
  return p;
}

inline json to_json(const Estate& e) {
  return {{"platform", to_string(e.platform)}, {"estate_id", e.estate_id}, {"member_parcels", e.member_parcels}};
}

inline Estate estate_from_json(const json& j) {
  using namespace json_fields;
  Estate e;
  e.platform = parse_platform(get_string(j, "platform", "estate"));
  e.estate_id = get_string(j, "estate_id", "estate");
  const json& members = require(j, "member_parcels", "estate");
  if (!members.is_array()) throw ParseError("estate: member_parcels must be an array");
  for (const auto& m : members) {
    if (!m.is_number_unsigned()) throw ParseError("estate: member ids must be unsigned integers");
    e.member_parcels.push_back(m.get<TokenId>());
  }
  std::sort(e.member_parcels.begin(), e.member_parcels.end());
  return e;
}

inline json to_json(const Trade& t) {
  return {{"platform", to_string(t.platform)},
          {"token_id", t.token_id},
          {"timestamp", format_timestamp(t.timestamp)},
          {"chain", to_string(t.chain)},
          {"exchange", t.exchange},
          {"currency", t.currency},
          {"amount_crypto", t.amount_crypto.to_string()},
          {"amount_usd", t.amount_usd.to_string()},
          {"buyer", t.buyer},
          {"seller", t.seller},
          {"economic", t.economic}};
}

inline json to_json(const Listing& l) {
  return {{"platform", to_string(l.platform)},
          {"token_id", l.token_id},
          {"exchange", l.exchange},
          {"price_currency", l.price_currency},
          {"price_amount", l.price_amount.to_string()},
          {"price_usd", l.price_usd.to_string()},
          {"observed_date", format_day(l.observed_date)}};
}

inline Listing listing_from_json(const json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "listing";
  Listing l;
  l.platform = parse_platform(get_string(j, "platform", ctx));
  l.token_id = get_uint(j, "token_id", ctx);
  l.exchange = get_string(j, "exchange", ctx);
  l.price_currency = get_string(j, "price_currency", ctx);
  l.price_amount = get_decimal(j, "price_amount", ctx);
  l.price_usd = get_decimal(j, "price_usd", ctx);
  l.observed_date = get_day(j, "observed_date", ctx);
  return l;
}

inline json to_json(const TrafficSample& s) {
  return {{"platform", to_string(s.platform)},
          {"token_id", s.token_id},
          {"period_start", format_timestamp(s.period_start)},
          {"metric", to_string(s.metric)},
          {"audience", to_string(s.audience)},
          {"count", s.count}};
}

inline TrafficSample traffic_from_json(const json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "traffic";
  TrafficSample s;
  s.platform = parse_platform(get_string(j, "platform", ctx));
  s.token_id = get_uint(j, "token_id", ctx);
  s.period_start = get_timestamp(j, "period_start", ctx);
  s.metric = parse_traffic_metric(get_string(j, "metric", ctx));
  s.audience = parse_audience(get_string(j, "audience", ctx));
  s.count = get_uint(j, "count", ctx);
  return s;
}

inline json to_json(const SocialSignal& s) {
  return {{"date", format_day(s.date)},
          {"source", to_string(s.source)},
          {"platform", s.platform ? json(to_string(*s.platform)) : json(nullptr)},
          {"value", s.value}};
}

inline SocialSignal signal_from_json(const json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "signal";
  SocialSignal s;
  s.date = get_day(j, "date", ctx);
  s.source = parse_signal_source(get_string(j, "source", ctx));
  if (has(j, "platform")) s.platform = parse_platform(get_string(j, "platform", ctx));
  s.value = get_double(j, "value", ctx);
  return s;
}

inline json to_json(const FxQuote& q) {
  return {{"date", format_day(q.date)}, {"currency", q.currency}, {"usd_rate", q.usd_rate.to_string()}};
}

inline FxQuote quote_from_json(const json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "quote";
  return {get_day(j, "date", ctx), get_string(j, "currency", ctx), get_decimal(j, "usd_rate", ctx)};
}

inline json to_json(const Series& s) {
  json points = json::array();
  for (const auto& p : s.points()) points.push_back({{"date", format_day(p.date)}, {"value", p.value}});
  return {{"name", s.name()}, {"points", std::move(points)}};
}

/// Splits newline-delimited text into non-blank lines paired with 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> ndjson_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    out.emplace_back(line_no, line);
  }
  return out;
}

template <typename Record>
std::string to_ndjson(const std::vector<Record>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

/// Applies `fn` to each parsed line; errors carry the line number.
template <typename Fn>
void for_each_ndjson(std::string_view text, std::string_view ctx, Fn&& fn) {
  for (const auto& [line_no, line] : ndjson_lines(text)) {
    const std::string where = std::string(ctx) + " line " + std::to_string(line_no);
    try {
      fn(json_fields::parse_document(line, "record"));
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
}

}  // namespace metaland
