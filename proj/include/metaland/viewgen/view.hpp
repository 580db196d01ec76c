#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "metaland/analytics/breakdown.hpp"
#include "metaland/core/enum_names.hpp"
#include "metaland/core/types.hpp"
#include "metaland/ingest/json_fields.hpp"
#include "metaland/valuation/features.hpp"
#include "metaland/valuation/gbt.hpp"

namespace metaland {

enum class ViewId { land, trading, last_price, value, fair_value, flip, traffic, resources };

namespace detail {
inline constexpr EnumNames<ViewId, 8> kViewNames{{{ViewId::land, "land"},
                                                  {ViewId::trading, "trading"},
                                                  {ViewId::last_price, "last_price"},
                                                  {ViewId::value, "value"},
                                                  {ViewId::fair_value, "fair_value"},
                                                  {ViewId::flip, "flip"},
                                                  {ViewId::traffic, "traffic"},
                                                  {ViewId::resources, "resources"}}};
}  // namespace detail

inline constexpr std::array<ViewId, 8> kAllViews{ViewId::land,       ViewId::trading, ViewId::last_price,
                                                 ViewId::value,      ViewId::fair_value, ViewId::flip,
                                                 ViewId::traffic,    ViewId::resources};

constexpr std::string_view to_string(ViewId v) { return detail::enum_to_string(detail::kViewNames, v); }
inline ViewId parse_view_id(std::string_view s) { return detail::enum_from_string(detail::kViewNames, s, "view"); }

inline constexpr std::size_t kColorBins = 10;
inline constexpr int kTrafficViewWindowDays = 30;
inline constexpr double kKodaResourceWeight = 10.0;

inline bool view_supported(PlatformId platform, ViewId view) {
  if (view == ViewId::traffic) return has_traffic(platform);
  if (view == ViewId::resources) return platform == PlatformId::otherside;
  return true;
}

inline bool view_needs_model(ViewId view) { return view == ViewId::value || view == ViewId::fair_value; }

/// Views available for a platform, in canonical order.
inline std::vector<ViewId> platform_views(PlatformId platform) {
  std::vector<ViewId> out;
  for (ViewId v : kAllViews)
    if (view_supported(platform, v)) out.push_back(v);
  return out;
}

struct ViewEntry {
  TokenId token_id = 0;
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::optional<double> metric;
  std::optional<int> color;

  bool operator==(const ViewEntry&) const = default;
};

struct ViewLayer {
  PlatformId platform = PlatformId::sandbox;
  ViewId view_id = ViewId::land;
  Day generated_at{};
  std::vector<ViewEntry> entries;  // one per parcel, ordered by token_id
  std::vector<double> legend;      // lower bound of each color bin; empty when no metric is defined

  bool operator==(const ViewLayer&) const = default;
};

/// legend[c] = sorted[floor(c * n / 10)]; a value takes the highest bin whose
/// lower bound it reaches.
inline std::vector<double> decile_legend(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  std::vector<double> legend(kColorBins);
  for (std::size_t c = 0; c < kColorBins; ++c) legend[c] = values[c * values.size() / kColorBins];
  return legend;
}

inline int color_of(double value, std::span<const double> legend) {
  const auto it = std::upper_bound(legend.begin(), legend.end(), value);
  return it == legend.begin() ? 0 : static_cast<int>(it - legend.begin()) - 1;
}

/// Inputs shared by all views of one platform.
struct ViewInputs {
  const Dataset& dataset;
  std::span<const Trade> market_trades;  // filtered economic trades
  const GbtModel* model = nullptr;
};

namespace detail {

inline std::optional<double> land_metric(const Parcel& p, const std::map<std::string, std::size_t>& estate_size) {
  const PlatformProfile& prof = profile(p.platform);
  return std::visit(
      [&](const auto& g) -> std::optional<double> {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, FixedSquare>) {
          if (!p.estate_id) return 1.0;
          auto it = estate_size.find(*p.estate_id);
          return it == estate_size.end() ? 1.0 : static_cast<double>(it->second);
        } else if constexpr (std::is_same_v<G, VoxelsBox>) {
          return g.area_m2;
        } else if constexpr (std::is_same_v<G, SomniumPlot>) {
          return g.volume_m3;
        } else {
          const auto it = std::find(prof.sediment_labels.begin(), prof.sediment_labels.end(), g.sediment);
          if (it == prof.sediment_labels.end()) return std::nullopt;
          return static_cast<double>(it - prof.sediment_labels.begin());
        }
      },
      p.geometry);
}

inline std::optional<double> resources_metric(const Parcel& p) {
  const auto* os = std::get_if<OthersideTraits>(&p.geometry);
  if (!os) return std::nullopt;
  double n = 0.0;
  if (!os->sediment.empty()) n += 1.0;
  if (!os->artifact.empty() && os->artifact != profile(p.platform).artifact_labels.front()) n += 1.0;
  if (os->has_koda) n += kKodaResourceWeight;
  return n;
}

}  // namespace detail

/// The day model-backed views are evaluated at: the latest market trade day.
inline Day view_reference_day(const FeatureContext& ctx) { return ctx.last_day(); }

inline ViewLayer generate_view(PlatformId platform, ViewId view, const ViewInputs& in) {
  const Dataset& ds = in.dataset;
  if (ds.platform != platform) throw InvalidArgument("dataset belongs to " + std::string(to_string(ds.platform)));
  if (!view_supported(platform, view))
    throw InvalidArgument("view '" + std::string(to_string(view)) + "' is not available on " + std::string(to_string(platform)));
  if (view_needs_model(view)) {
    if (in.model == nullptr) throw InvalidArgument("view '" + std::string(to_string(view)) + "' requires a trained model");
    if (in.model->schema.platform != platform) throw InvalidArgument("model belongs to another platform");
  }

  const FeatureContext ctx(ds, in.market_trades);
  const Day ref_day = view_reference_day(ctx);

  std::map<std::string, std::size_t> estate_size;
  for (const auto& e : ds.estates) estate_size[e.estate_id] = e.member_parcels.size();

  std::map<TokenId, Decimal> last_price;
  std::map<TokenId, std::size_t> flips;
  if (view == ViewId::last_price || view == ViewId::value) {
    // Trades are timestamp-ordered; the last write per token wins.
    std::vector<const Trade*> econ;
    for (const auto& t : ds.trades)
      if (t.economic) econ.push_back(&t);
    std::stable_sort(econ.begin(), econ.end(), [](const Trade* a, const Trade* b) { return a->timestamp < b->timestamp; });
    for (const Trade* t : econ) last_price[t->token_id] = t->amount_usd;
  }
  if (view == ViewId::flip) flips = flip_counts(ds.trades);

  std::map<TokenId, Decimal> listed;
  if (view == ViewId::trading && !ds.listings.empty()) {
    Day latest = ds.listings.front().observed_date;
    for (const auto& l : ds.listings) latest = std::max(latest, l.observed_date);
    for (const auto& l : ds.listings) {
      if (l.observed_date != latest) continue;
      auto [it, inserted] = listed.emplace(l.token_id, l.price_usd);
      if (!inserted) it->second = std::min(it->second, l.price_usd);
    }
  }

  Day traffic_day = ref_day;
  if (view == ViewId::traffic && !ds.traffic.empty()) {
    traffic_day = day_of(ds.traffic.front().period_start);
    for (const auto& s : ds.traffic) traffic_day = std::max(traffic_day, day_of(s.period_start));
  }

  std::vector<const Parcel*> parcels;
  for (const auto& p : ds.parcels) parcels.push_back(&p);
  std::sort(parcels.begin(), parcels.end(), [](const Parcel* a, const Parcel* b) { return a->token_id < b->token_id; });

  auto fair_value = [&](const Parcel& p) { return predict(*in.model, ctx.features_at(p, ref_day, in.model->schema)); };

  ViewLayer layer{platform, view, ref_day, {}, {}};
  std::vector<double> defined;
  for (const Parcel* p : parcels) {
    std::optional<double> m;
    switch (view) {
      case ViewId::land:
        m = detail::land_metric(*p, estate_size);
        break;
      case ViewId::trading:
        if (auto it = listed.find(p->token_id); it != listed.end()) m = it->second.to_double();
        break;
      case ViewId::last_price:
        if (auto it = last_price.find(p->token_id); it != last_price.end()) m = it->second.to_double();
        break;
      case ViewId::value:
        if (auto it = last_price.find(p->token_id); it != last_price.end()) {
          const double fv = fair_value(*p);
          if (fv > 0.0) m = it->second.to_double() / fv;
        }
        break;
      case ViewId::fair_value:
        m = fair_value(*p);
        break;
      case ViewId::flip: {
        auto it = flips.find(p->token_id);
        m = it == flips.end() ? 0.0 : static_cast<double>(it->second);
        break;
      }
      case ViewId::traffic:
        m = ctx.traffic_sum(p->token_id, traffic_day, kTrafficViewWindowDays);
        break;
      case ViewId::resources:
        m = detail::resources_metric(*p);
        break;
    }
    if (m) defined.push_back(*m);
    layer.entries.push_back({p->token_id, p->x, p->y, m, std::nullopt});
  }
  layer.legend = decile_legend(std::move(defined));
  for (auto& e : layer.entries)
    if (e.metric) e.color = color_of(*e.metric, layer.legend);
  return layer;
}

inline nlohmann::json to_json(const ViewLayer& layer) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : layer.entries) {
    nlohmann::json je{{"token_id", e.token_id}, {"x", e.x}, {"y", e.y}, {"metric", nullptr}, {"color", nullptr}};
    if (e.metric) je["metric"] = *e.metric;
    if (e.color) je["color"] = *e.color;
    entries.push_back(std::move(je));
  }
  return {{"platform", to_string(layer.platform)},
          {"view_id", to_string(layer.view_id)},
          {"generated_at", format_day(layer.generated_at)},
          {"legend", layer.legend},
          {"entries", entries}};
}

/// Wire document; compact, sorted keys, so equal layers give equal bytes.
inline std::string serialize_view(const ViewLayer& layer) { return to_json(layer).dump(); }

inline ViewLayer view_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "view";
  ViewLayer layer;
  layer.platform = parse_platform(get_string(j, "platform", ctx));
  layer.view_id = parse_view_id(get_string(j, "view_id", ctx));
  layer.generated_at = get_day(j, "generated_at", ctx);
  for (const auto& v : require(j, "legend", ctx)) layer.legend.push_back(as_double(v, "legend", ctx));
  for (const auto& je : require(j, "entries", ctx)) {
    ViewEntry e;
    e.token_id = get_uint(je, "token_id", ctx);
    e.x = get_int(je, "x", ctx);
    e.y = get_int(je, "y", ctx);
    if (has(je, "metric")) e.metric = get_double(je, "metric", ctx);
    if (has(je, "color")) e.color = static_cast<int>(get_int(je, "color", ctx));
    if (e.metric.has_value() != e.color.has_value()) throw ParseError("view: color must be null exactly when metric is null");
    layer.entries.push_back(e);
  }
  return layer;
}

inline ViewLayer parse_view(std::string_view text) { return view_from_json(json_fields::parse_document(text, "view")); }

}  // namespace metaland
