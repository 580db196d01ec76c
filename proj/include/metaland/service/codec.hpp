#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "metaland/analytics/aggregate.hpp"
#include "metaland/analytics/correlation.hpp"
#include "metaland/analytics/filter.hpp"
#include "metaland/ingest/json_fields.hpp"

namespace metaland {

inline nlohmann::json to_json(const FilterReport& r) {
  return {{"platform", to_string(r.platform)},
          {"considered_volume_usd", r.considered_volume_usd.to_string()},
          {"discarded_volume_usd", r.discarded_volume_usd.to_string()},
          {"considered_count", r.considered_count},
          {"discarded_count", r.discarded_count},
          {"threshold_usd", r.threshold_usd.to_string()}};
}

inline FilterReport filter_report_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "filter report";
  return {parse_platform(get_string(j, "platform", ctx)), get_decimal(j, "considered_volume_usd", ctx),
          get_decimal(j, "discarded_volume_usd", ctx),    get_uint(j, "considered_count", ctx),
          get_uint(j, "discarded_count", ctx),            get_decimal(j, "threshold_usd", ctx)};
}

inline nlohmann::json to_json(const AggregateRow& r) {
  return {{"platform", to_string(r.platform)},
          {"granularity", to_string(r.granularity)},
          {"period_start", format_day(r.period_start)},
          {"period", r.period},
          {"group", r.group ? nlohmann::json(*r.group) : nlohmann::json(nullptr)},
          {"avg_price_usd", r.avg_price_usd},
          {"volume_usd", r.volume_usd.to_string()},
          {"tx_count", r.tx_count}};
}

inline AggregateRow aggregate_row_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "aggregate row";
  AggregateRow r;
  r.platform = parse_platform(get_string(j, "platform", ctx));
  r.granularity = parse_granularity(get_string(j, "granularity", ctx));
  r.period_start = get_day(j, "period_start", ctx);
  r.period = get_string(j, "period", ctx);
  if (has(j, "group")) r.group = get_string(j, "group", ctx);
  r.avg_price_usd = get_double(j, "avg_price_usd", ctx);
  r.volume_usd = get_decimal(j, "volume_usd", ctx);
  r.tx_count = get_uint(j, "tx_count", ctx);
  return r;
}

inline nlohmann::json to_json(const std::vector<AggregateRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) out.push_back(to_json(r));
  return out;
}

inline nlohmann::json to_json(const CorrelationMatrix& m) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& row : m.values) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& v : row) jr.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
    values.push_back(std::move(jr));
  }
  return {{"names", m.names}, {"values", values}, {"undefined", m.undefined}};
}

inline CorrelationMatrix correlation_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "correlations";
  CorrelationMatrix m;
  for (const auto& n : require(j, "names", ctx)) m.names.push_back(n.get<std::string>());
  for (const auto& n : require(j, "undefined", ctx)) m.undefined.push_back(n.get<std::string>());
  for (const auto& jr : require(j, "values", ctx)) {
    std::vector<std::optional<double>> row;
    for (const auto& v : jr) row.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    if (row.size() != m.names.size()) throw ParseError("correlations: matrix is not square");
    m.values.push_back(std::move(row));
  }
  if (m.values.size() != m.names.size()) throw ParseError("correlations: matrix is not square");
  return m;
}

/// CSV field quoting for values that contain separators or quotes.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Shortest round-trip text for a double, as used in JSON output.
inline std::string format_number(double v) { return nlohmann::json(v).dump(); }

}  // namespace metaland
