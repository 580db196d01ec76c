#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "metaland/core/types.hpp"

namespace metaland {

struct Violation {
  std::string rule;     // stable rule identifier, e.g. "parcel.coordinates_unique"
  std::string locator;  // e.g. "parcels[3] token 17"
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool accepted() const { return violations.empty(); }
  std::size_t count(std::string_view rule) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; }));
  }
  std::string summary(std::size_t max_lines = 10) const {
    std::string out;
    for (std::size_t i = 0; i < violations.size() && i < max_lines; ++i)
      out += violations[i].rule + " at " + violations[i].locator + ": " + violations[i].message + "\n";
    if (violations.size() > max_lines) out += "... " + std::to_string(violations.size() - max_lines) + " more\n";
    return out;
  }
};

namespace detail {

inline std::string locate(std::string_view collection, std::size_t index, TokenId token) {
  return std::string(collection) + "[" + std::to_string(index) + "] token " + std::to_string(token);
}

inline std::string locate(std::string_view collection, std::size_t index) {
  return std::string(collection) + "[" + std::to_string(index) + "]";
}

inline void check_geometry(const Parcel& p, const std::string& where, std::vector<Violation>& out) {
  const PlatformProfile& prof = profile(p.platform);
  if (geometry_kind(p.geometry) != prof.geometry) {
    out.push_back({"parcel.geometry_kind", where, "geometry variant does not match platform profile"});
    return;
  }
  if (const auto* sq = std::get_if<FixedSquare>(&p.geometry)) {
    if (!prof.fixed_side_m || sq->side_m != *prof.fixed_side_m)
      out.push_back({"parcel.geometry", where, "fixed-square side " + std::to_string(sq->side_m) + " differs from profile"});
  } else if (const auto* box = std::get_if<VoxelsBox>(&p.geometry)) {
    if (!(box->area_m2 > 0.0) || !(box->height_m > 0.0))
      out.push_back({"parcel.geometry", where, "voxels area and height must be positive"});
  } else if (const auto* som = std::get_if<SomniumPlot>(&p.geometry)) {
    if (som->volume_m3 != somnium_volume_m3(som->size_class))
      out.push_back({"parcel.geometry", where,
                     "somnium volume " + std::to_string(som->volume_m3) + " inconsistent with class " +
                         std::string(to_string(som->size_class))});
  }
}

inline void check_estate_shape(const Estate& e, const std::map<TokenId, const Parcel*>& by_token, const std::string& where,
                               std::vector<Violation>& out) {
  std::set<std::pair<int, int>> cells;
  for (TokenId t : e.member_parcels) {
    auto it = by_token.find(t);
    if (it != by_token.end()) cells.insert({it->second->x, it->second->y});
  }
  if (cells.empty()) return;
  // 4-neighbourhood flood fill from any member.
  std::set<std::pair<int, int>> seen{*cells.begin()};
  std::queue<std::pair<int, int>> frontier;
  frontier.push(*cells.begin());
  while (!frontier.empty()) {
    const auto [x, y] = frontier.front();
    frontier.pop();
    for (const auto& n : {std::pair{x + 1, y}, std::pair{x - 1, y}, std::pair{x, y + 1}, std::pair{x, y - 1}}) {
      if (cells.count(n) && !seen.count(n)) {
        seen.insert(n);
        frontier.push(n);
      }
    }
  }
  if (seen.size() != cells.size()) out.push_back({"estate.connected", where, "estate members are not edge-connected"});

  const PlatformProfile& prof = profile(e.platform);
  if (prof.estates_square) {
    int min_x = cells.begin()->first, max_x = min_x, min_y = cells.begin()->second, max_y = min_y;
    for (const auto& [x, y] : cells) {
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
    const int w = max_x - min_x + 1;
    const int h = max_y - min_y + 1;
    const bool full = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) == cells.size();
    if (w != h || !full) {
      out.push_back({"estate.shape", where, "estate must be a filled square"});
    } else if (!prof.estate_sides.empty() &&
               std::find(prof.estate_sides.begin(), prof.estate_sides.end(), w) == prof.estate_sides.end()) {
      out.push_back({"estate.shape", where, "estate side " + std::to_string(w) + " not an allowed size"});
    }
  }
}

}  // namespace detail

/// Checks every record invariant of a platform dataset. The dataset is
/// accepted iff the returned report is empty.
inline ValidationReport validate_dataset(const Dataset& ds) {
  using detail::locate;
  std::vector<Violation> out;

  std::map<TokenId, const Parcel*> by_token;
  std::map<std::pair<int, int>, TokenId> by_cell;
  std::map<std::string, const Estate*> estates;
  for (const auto& e : ds.estates) estates.emplace(e.estate_id, &e);

  for (std::size_t i = 0; i < ds.parcels.size(); ++i) {
    const Parcel& p = ds.parcels[i];
    const std::string where = locate("parcels", i, p.token_id);
    if (p.platform != ds.platform) out.push_back({"record.platform", where, "parcel belongs to another platform"});
    if (!by_token.emplace(p.token_id, &p).second)
      out.push_back({"parcel.token_unique", where, "duplicate token id"});
    if (!by_cell.emplace(std::pair{p.x, p.y}, p.token_id).second)
      out.push_back({"parcel.coordinates_unique", where,
                     "coordinates (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") already used"});
    detail::check_geometry(p, where, out);
    if (p.distance_to_nearest_poi && !(*p.distance_to_nearest_poi >= 0.0))
      out.push_back({"parcel.poi_distance", where, "distance to nearest POI must be non-negative"});
    if (p.estate_id) {
      auto it = estates.find(*p.estate_id);
      if (it == estates.end() ||
          !std::binary_search(it->second->member_parcels.begin(), it->second->member_parcels.end(), p.token_id))
        out.push_back({"parcel.estate_membership", where, "estate '" + *p.estate_id + "' missing or does not list parcel"});
    }
  }

  for (std::size_t i = 0; i < ds.estates.size(); ++i) {
    const Estate& e = ds.estates[i];
    const std::string where = locate("estates", i) + " estate " + e.estate_id;
    if (e.platform != ds.platform) out.push_back({"record.platform", where, "estate belongs to another platform"});
    bool members_ok = true;
    for (TokenId t : e.member_parcels) {
      auto it = by_token.find(t);
      if (it == by_token.end() || it->second->estate_id != e.estate_id) {
        out.push_back({"estate.members", where, "member token " + std::to_string(t) + " missing or not tagged with estate"});
        members_ok = false;
      }
    }
    if (members_ok) detail::check_estate_shape(e, by_token, where, out);
  }

  std::set<Day> trade_days;
  for (std::size_t i = 0; i < ds.trades.size(); ++i) {
    const Trade& t = ds.trades[i];
    const std::string where = locate("trades", i, t.token_id);
    if (t.platform != ds.platform) out.push_back({"record.platform", where, "trade belongs to another platform"});
    if (t.amount_crypto.is_negative() || t.amount_usd.is_negative())
      out.push_back({"trade.amount", where, "amounts must be non-negative"});
    if (t.economic != t.amount_usd.is_positive())
      out.push_back({"trade.economic_flag", where, "economic flag must equal (amount_usd > 0)"});
    if (t.buyer == t.seller) out.push_back({"trade.counterparties", where, "buyer equals seller"});
    if (!by_token.count(t.token_id)) out.push_back({"trade.parcel", where, "trade references unknown parcel"});
    trade_days.insert(day_of(t.timestamp));
  }

  std::set<std::tuple<TokenId, std::string, Day>> listing_keys;
  for (std::size_t i = 0; i < ds.listings.size(); ++i) {
    const Listing& l = ds.listings[i];
    const std::string where = locate("listings", i, l.token_id);
    if (l.platform != ds.platform) out.push_back({"record.platform", where, "listing belongs to another platform"});
    if (!l.price_amount.is_positive() || !l.price_usd.is_positive())
      out.push_back({"listing.price", where, "listing prices must be positive"});
    if (!listing_keys.emplace(l.token_id, l.exchange, l.observed_date).second)
      out.push_back({"listing.unique", where, "duplicate (token, exchange, observed_date)"});
  }

  for (std::size_t i = 0; i < ds.traffic.size(); ++i) {
    const TrafficSample& s = ds.traffic[i];
    const std::string where = locate("traffic", i, s.token_id);
    if (s.platform != ds.platform) out.push_back({"record.platform", where, "traffic sample belongs to another platform"});
    if (!traffic_allowed(s.platform, s.metric, s.audience))
      out.push_back({"traffic.metric", where,
                     std::string(to_string(s.metric)) + "/" + std::string(to_string(s.audience)) +
                         " not valid for " + std::string(to_string(s.platform))});
  }

  std::set<std::tuple<Day, SignalSource, int>> signal_keys;
  for (std::size_t i = 0; i < ds.signals.size(); ++i) {
    const SocialSignal& s = ds.signals[i];
    const std::string where = locate("signals", i);
    const bool needs_platform = s.source == SignalSource::twitter_platform;
    if (needs_platform != s.platform.has_value())
      out.push_back({"signal.platform", where, "platform required iff source is twitter_platform"});
    if (!(s.value >= 0.0)) out.push_back({"signal.value", where, "signal value must be non-negative"});
    const int pkey = s.platform ? static_cast<int>(*s.platform) : -1;
    if (!signal_keys.emplace(s.date, s.source, pkey).second)
      out.push_back({"signal.unique", where, "duplicate (date, source, platform)"});
  }

  std::set<std::pair<Day, std::string>> quote_keys;
  std::set<Day> eth_days;
  for (std::size_t i = 0; i < ds.quotes.size(); ++i) {
    const FxQuote& q = ds.quotes[i];
    const std::string where = locate("quotes", i) + " " + q.currency + "@" + format_day(q.date);
    if (!q.usd_rate.is_positive()) out.push_back({"quote.rate", where, "usd_rate must be positive"});
    if (!quote_keys.emplace(q.date, q.currency).second)
      out.push_back({"quote.unique", where, "duplicate (date, currency)"});
    if (q.currency == "ETH") eth_days.insert(q.date);
  }
  for (Day d : trade_days)
    if (!eth_days.count(d)) out.push_back({"quote.eth_present", "quotes@" + format_day(d), "no ETH quote on a trade day"});

  return {std::move(out)};
}

}  // namespace metaland
