#pragma once

#include <charconv>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "metaland/analytics/breakdown.hpp"
#include "metaland/ingest/records.hpp"
#include "metaland/service/codec.hpp"
#include "metaland/service/snapshot.hpp"
#include "metaland/viewgen/view.hpp"

namespace metaland {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using QueryParams = std::map<std::string, std::string>;

/// Read-only lookup tables and pre-rendered bodies over one snapshot.
class ApiIndex {
 public:
  explicit ApiIndex(std::shared_ptr<const Snapshot> snapshot) : snapshot_(std::move(snapshot)) {
    nlohmann::json platforms = nlohmann::json::array();
    for (const auto& [p, a] : snapshot_->platforms) {
      platforms_.emplace(p, PlatformIndex(p, a));
      const auto [lo, hi] = a.date_range();
      nlohmann::json views = nlohmann::json::array();
      for (const auto& [v, body] : a.views) views.push_back(to_string(v));
      platforms.push_back({{"platform", to_string(p)},
                           {"first_day", a.dataset.trades.empty() ? nlohmann::json(nullptr) : nlohmann::json(format_day(lo))},
                           {"last_day", a.dataset.trades.empty() ? nlohmann::json(nullptr) : nlohmann::json(format_day(hi))},
                           {"parcel_count", a.dataset.parcels.size()},
                           {"trade_count", a.kept.size()},
                           {"views", views}});
    }
    platforms_body_ = nlohmann::json{{"platforms", platforms}, {"digest", snapshot_digest(*snapshot_)}}.dump();
  }

  const Snapshot& snapshot() const { return *snapshot_; }

  /// Routes one GET request. Never throws for well-formed snapshots.
  ApiResponse handle(std::string_view path, const QueryParams& query = {}) const {
    try {
      return route(path, query);
    } catch (const ApiFailure& f) {
      return error(f.status, f.message);
    } catch (const std::exception& e) {
      return error(500, e.what());
    }
  }

 private:
  struct ApiFailure {
    int status;
    std::string message;
  };

  struct PlatformIndex {
    const PlatformArtifacts* artifacts;
    std::map<TokenId, const Parcel*> parcels;
    std::map<TokenId, const Trade*> last_trade;
    std::map<TokenId, const Listing*> listing;
    std::map<TokenId, std::size_t> flips;
    std::map<TokenId, double> fair_value;
    std::map<AggregateKey, std::string> aggregate_bodies;
    std::string correlations_body;
    std::string report_body;

    PlatformIndex(PlatformId p, const PlatformArtifacts& a) : artifacts(&a) {
      for (const auto& parcel : a.dataset.parcels) parcels.emplace(parcel.token_id, &parcel);
      for (const auto& t : a.dataset.trades) {
        if (!t.economic) continue;
        auto& slot = last_trade[t.token_id];
        if (slot == nullptr || !(t.timestamp < slot->timestamp)) slot = &t;
      }
      if (!a.dataset.listings.empty()) {
        Day latest = a.dataset.listings.front().observed_date;
        for (const auto& l : a.dataset.listings) latest = std::max(latest, l.observed_date);
        for (const auto& l : a.dataset.listings) {
          if (l.observed_date != latest) continue;
          auto& slot = listing[l.token_id];
          if (slot == nullptr || l.price_usd < slot->price_usd) slot = &l;
        }
      }
      flips = flip_counts(a.dataset.trades);
      if (auto it = a.views.find(ViewId::fair_value); it != a.views.end())
        for (const auto& e : parse_view(it->second).entries)
          if (e.metric) fair_value.emplace(e.token_id, *e.metric);
      for (const auto& [key, rows] : a.aggregates)
        aggregate_bodies[key] = nlohmann::json{{"platform", to_string(p)},
                                               {"granularity", to_string(key.first)},
                                               {"group_by", to_string(key.second)},
                                               {"rows", to_json(rows)}}
                                    .dump();
      nlohmann::json corr = to_json(a.correlations);
      corr["platform"] = to_string(p);
      correlations_body = corr.dump();
      report_body = report_json(a).dump();
    }
  };

  static ApiResponse ok(std::string body) { return {200, std::move(body)}; }

  static ApiResponse error(int status, const std::string& message) {
    return {status, nlohmann::json{{"error", {{"status", status}, {"message", message}}}}.dump()};
  }

  [[noreturn]] static void fail(int status, std::string message) { throw ApiFailure{status, std::move(message)}; }

  static std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos <= path.size()) {
      const auto next = path.find('/', pos);
      const auto end = next == std::string_view::npos ? path.size() : next;
      if (end > pos) parts.push_back(path.substr(pos, end - pos));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    return parts;
  }

  template <typename Int>
  static Int parse_int(std::string_view s, std::string_view what, int status = 400) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) fail(status, "malformed " + std::string(what));
    return v;
  }

  static std::optional<std::string> param(const QueryParams& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end()) return std::nullopt;
    return it->second;
  }

  const PlatformIndex& platform(std::string_view name) const {
    PlatformId id{};
    try {
      id = parse_platform(name);
    } catch (const ParseError&) {
      fail(404, "unknown platform '" + std::string(name) + "'");
    }
    auto it = platforms_.find(id);
    if (it == platforms_.end()) fail(404, "platform '" + std::string(name) + "' is not in this snapshot");
    return it->second;
  }

  ApiResponse route(std::string_view path, const QueryParams& query) const {
    const auto parts = split_path(path);
    if (parts.size() < 2 || parts[0] != "v1") fail(404, "no such endpoint");
    if (parts.size() == 2 && parts[1] == "platforms") return ok(platforms_body_);
    const PlatformIndex& pi = platform(parts[1]);
    const std::string_view what = parts.size() > 2 ? parts[2] : std::string_view{};
    if (what == "parcels" && parts.size() == 3) return parcels(pi, query);
    if (what == "parcels" && parts.size() == 4) return parcel_detail(pi, parts[3]);
    if (what == "trades" && parts.size() == 3) return trades(pi, query);
    if (what == "aggregates" && parts.size() == 3) return aggregates(pi, query);
    if (what == "correlations" && parts.size() == 3) return ok(pi.correlations_body);
    if (what == "views" && parts.size() == 4) return view(pi, parts[3]);
    if (what == "model" && parts.size() == 4 && parts[3] == "report") return ok(pi.report_body);
    fail(404, "no such endpoint");
  }

  static ApiResponse parcels(const PlatformIndex& pi, const QueryParams& query) {
    std::optional<std::array<long, 4>> box;
    if (auto b = param(query, "bbox")) {
      std::array<long, 4> v{};
      std::size_t i = 0;
      std::string_view rest = *b;
      while (true) {
        const auto comma = rest.find(',');
        if (i == 4) fail(400, "bbox must be x1,y1,x2,y2");
        v[i++] = parse_int<long>(rest.substr(0, comma), "bbox");
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      if (i != 4) fail(400, "bbox must be x1,y1,x2,y2");
      if (v[0] > v[2] || v[1] > v[3]) fail(400, "bbox corners must satisfy x1 <= x2 and y1 <= y2");
      box = v;
    }
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [token, p] : pi.parcels) {
      if (box && ((*box)[0] > p->x || p->x > (*box)[2] || (*box)[1] > p->y || p->y > (*box)[3])) continue;
      out.push_back(to_json(*p));
    }
    nlohmann::json body{{"platform", to_string(pi.artifacts->dataset.platform)}, {"bbox", nullptr}, {"parcels", out}};
    if (box) body["bbox"] = *box;
    return ok(body.dump());
  }

  static ApiResponse parcel_detail(const PlatformIndex& pi, std::string_view token_text) {
    const auto token = parse_int<TokenId>(token_text, "token id", 404);
    auto it = pi.parcels.find(token);
    if (it == pi.parcels.end()) fail(404, "unknown token " + std::string(token_text));
    auto lt = pi.last_trade.find(token);
    auto li = pi.listing.find(token);
    auto fl = pi.flips.find(token);
    auto fv = pi.fair_value.find(token);
    return ok(nlohmann::json{{"parcel", to_json(*it->second)},
                             {"last_trade", lt == pi.last_trade.end() ? nlohmann::json(nullptr) : to_json(*lt->second)},
                             {"current_listing", li == pi.listing.end() ? nlohmann::json(nullptr) : to_json(*li->second)},
                             {"flip_count", fl == pi.flips.end() ? 0 : fl->second},
                             {"fair_value", fv == pi.fair_value.end() ? nlohmann::json(nullptr) : nlohmann::json(fv->second)}}
                  .dump());
  }

  /// `from`/`to` accept a day (inclusive) or a UTC timestamp.
  static std::optional<Timestamp> bound(const QueryParams& query, const std::string& key, bool upper) {
    auto v = param(query, key);
    if (!v) return std::nullopt;
    try {
      if (v->size() == 10) {
        const Day d = parse_day(*v);
        return upper ? Timestamp(d + std::chrono::days{1}) - std::chrono::seconds{1} : Timestamp(d);
      }
      return parse_timestamp(*v);
    } catch (const ParseError& e) {
      fail(400, "malformed '" + key + "': " + e.what());
    }
  }

  static ApiResponse trades(const PlatformIndex& pi, const QueryParams& query) {
    const auto from = bound(query, "from", false);
    const auto to = bound(query, "to", true);
    if (from && to && *to < *from) fail(400, "'from' is after 'to'");
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : pi.artifacts->kept) {
      if ((from && t.timestamp < *from) || (to && *to < t.timestamp)) continue;
      out.push_back(to_json(t));
    }
    return ok(nlohmann::json{{"platform", to_string(pi.artifacts->dataset.platform)},
                             {"from", param(query, "from") ? nlohmann::json(*param(query, "from")) : nlohmann::json(nullptr)},
                             {"to", param(query, "to") ? nlohmann::json(*param(query, "to")) : nlohmann::json(nullptr)},
                             {"trades", out}}
                  .dump());
  }

  static ApiResponse aggregates(const PlatformIndex& pi, const QueryParams& query) {
    AggregateKey key{Granularity::day, GroupBy::none};
    try {
      if (auto g = param(query, "granularity"); g && !g->empty()) key.first = parse_granularity(*g);
      if (auto b = param(query, "group_by"); b && !b->empty()) key.second = parse_group_by(*b);
    } catch (const ParseError& e) {
      fail(400, e.what());
    }
    auto it = pi.aggregate_bodies.find(key);
    if (it == pi.aggregate_bodies.end()) fail(404, "aggregate table not in snapshot");
    return ok(it->second);
  }

  static ApiResponse view(const PlatformIndex& pi, std::string_view name) {
    ViewId id{};
    try {
      id = parse_view_id(name);
    } catch (const ParseError&) {
      fail(404, "unknown view '" + std::string(name) + "'");
    }
    auto it = pi.artifacts->views.find(id);
    if (it == pi.artifacts->views.end()) fail(404, "view '" + std::string(name) + "' is not available on this platform");
    return ok(it->second);
  }

  std::shared_ptr<const Snapshot> snapshot_;
  std::map<PlatformId, PlatformIndex> platforms_;
  std::string platforms_body_;
};

}  // namespace metaland
