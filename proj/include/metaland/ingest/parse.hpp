#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "metaland/core/types.hpp"
#include "metaland/ingest/metadata.hpp"
#include "metaland/ingest/records.hpp"

namespace metaland {

/// Same-day FX lookup; no interpolation between days.
class QuoteBook {
 public:
  QuoteBook() = default;
  explicit QuoteBook(const std::vector<FxQuote>& quotes) {
    for (const auto& q : quotes) rates_[{q.date, q.currency}] = q.usd_rate;
  }

  std::optional<Decimal> rate(Day day, std::string_view currency) const {
    auto it = rates_.find({day, std::string(currency)});
    if (it == rates_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::pair<Day, std::string>, Decimal> rates_;
};

/// Parses newline-delimited trade records. Missing `amount_usd` is completed
/// from the same-day quote; `economic` is always derived from amount_usd.
/// Output is sorted by timestamp.
inline std::vector<Trade> parse_trades(PlatformId platform, std::string_view text, const QuoteBook& quotes) {
  using namespace json_fields;
  std::vector<Trade> out;
  for_each_ndjson(text, "trades", [&](const json& j) {
    constexpr std::string_view ctx = "trade";
    Trade t;
    t.platform = has(j, "platform") ? parse_platform(get_string(j, "platform", ctx)) : platform;
    if (t.platform != platform) throw DataError("trade for platform " + std::string(to_string(t.platform)));
    t.token_id = get_uint(j, "token_id", ctx);
    t.timestamp = get_timestamp(j, "timestamp", ctx);
    t.chain = has(j, "chain") ? parse_chain(get_string(j, "chain", ctx)) : Chain::ethereum;
    t.exchange = get_string(j, "exchange", ctx);
    t.currency = get_string(j, "currency", ctx);
    t.amount_crypto = get_decimal(j, "amount_crypto", ctx);
    t.buyer = get_string(j, "buyer", ctx);
    t.seller = get_string(j, "seller", ctx);
    if (t.amount_crypto.is_negative()) throw DataError("negative amount_crypto");
    if (has(j, "amount_usd")) {
      t.amount_usd = get_decimal(j, "amount_usd", ctx);
      if (t.amount_usd.is_negative()) throw DataError("negative amount_usd");
    } else {
      const auto rate = quotes.rate(day_of(t.timestamp), t.currency);
      if (!rate)
        throw DataError("no " + t.currency + " quote on " + format_day(day_of(t.timestamp)) + " to complete amount_usd");
      t.amount_usd = t.amount_crypto * *rate;
    }
    t.economic = t.amount_usd.is_positive();
    out.push_back(std::move(t));
  });
  std::stable_sort(out.begin(), out.end(), [](const Trade& a, const Trade& b) { return a.timestamp < b.timestamp; });
  return out;
}

namespace detail {

/// Keeps the cheapest listing per (token, exchange, observed_date).
inline std::vector<Listing> collapse_listings(std::vector<Listing> in) {
  std::map<std::tuple<Day, std::string, TokenId>, Listing> best;
  for (auto& l : in) {
    auto key = std::tuple{l.observed_date, l.exchange, l.token_id};
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(std::move(key), std::move(l));
    } else if (std::tie(l.price_usd, l.price_amount) < std::tie(it->second.price_usd, it->second.price_amount)) {
      it->second = std::move(l);
    }
  }
  std::vector<Listing> out;
  out.reserve(best.size());
  for (auto& [k, l] : best) out.push_back(std::move(l));
  return out;
}

inline void append_listing_response(const json& doc, std::vector<Listing>& out) {
  using namespace json_fields;
  constexpr std::string_view ctx = "listings";
  if (!doc.is_object()) throw ParseError("listings: response must be an object");
  if (!has(doc, "orders")) return;
  const json& orders = doc["orders"];
  if (!orders.is_array()) throw ParseError("listings: orders must be an array");
  if (orders.empty()) return;
  const std::string exchange = get_string(doc, "exchange", ctx);
  const Day observed = get_day(doc, "observed_date", ctx);
  for (const auto& o : orders) {
    Listing l;
    l.platform = parse_platform(get_string(o, "platform", ctx));
    l.token_id = get_uint(o, "token_id", ctx);
    l.exchange = exchange;
    l.price_currency = get_string(o, "price_currency", ctx);
    l.price_amount = get_decimal(o, "price_amount", ctx);
    l.price_usd = get_decimal(o, "price_usd", ctx);
    l.observed_date = observed;
    if (!l.price_amount.is_positive() || !l.price_usd.is_positive())
      throw DataError("listing for token " + std::to_string(l.token_id) + " has a non-positive price");
    out.push_back(std::move(l));
  }
}

}  // namespace detail

/// Parses one exchange order-book response:
/// `{"exchange": ..., "observed_date": ..., "orders": [{platform, token_id,
/// price_currency, price_amount, price_usd}, ...]}`.
inline std::vector<Listing> parse_listings(std::string_view document) {
  std::vector<Listing> raw;
  if (document.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    try {
      detail::append_listing_response(json_fields::parse_document(document, "listings"), raw);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("listings: ") + e.what());
    }
  }
  return detail::collapse_listings(std::move(raw));
}

/// Newline-delimited sequence of exchange responses, merged and collapsed.
inline std::vector<Listing> parse_listing_responses(std::string_view text) {
  std::vector<Listing> raw;
  for_each_ndjson(text, "listings", [&](const json& doc) { detail::append_listing_response(doc, raw); });
  return detail::collapse_listings(std::move(raw));
}

/// Renders listings as one response document per (exchange, observed_date).
inline std::string listings_to_responses(const std::vector<Listing>& listings) {
  std::map<std::pair<std::string, Day>, json> docs;
  for (const auto& l : listings) {
    auto& doc = docs[{l.exchange, l.observed_date}];
    if (doc.is_null()) doc = {{"exchange", l.exchange}, {"observed_date", format_day(l.observed_date)}, {"orders", json::array()}};
    doc["orders"].push_back({{"platform", to_string(l.platform)},
                             {"token_id", l.token_id},
                             {"price_currency", l.price_currency},
                             {"price_amount", l.price_amount.to_string()},
                             {"price_usd", l.price_usd.to_string()}});
  }
  std::string out;
  for (const auto& [k, doc] : docs) out += doc.dump() + "\n";
  return out;
}

/// Parses traffic samples; metric/audience must be valid for the platform.
/// Output sorted by (token_id, period_start).
inline std::vector<TrafficSample> parse_traffic(PlatformId platform, std::string_view text) {
  std::vector<TrafficSample> out;
  for_each_ndjson(text, "traffic", [&](const json& j) {
    TrafficSample s = traffic_from_json(j);
    if (s.platform != platform) throw DataError("traffic sample for platform " + std::string(to_string(s.platform)));
    if (!traffic_allowed(platform, s.metric, s.audience))
      throw DataError(std::string(to_string(s.metric)) + "/" + std::string(to_string(s.audience)) + " not valid for " +
                      std::string(to_string(platform)));
    out.push_back(s);
  });
  std::stable_sort(out.begin(), out.end(), [](const TrafficSample& a, const TrafficSample& b) {
    return std::tie(a.token_id, a.period_start) < std::tie(b.token_id, b.period_start);
  });
  return out;
}

inline std::vector<SocialSignal> parse_signals(std::string_view text) {
  std::vector<SocialSignal> out;
  for_each_ndjson(text, "signals", [&](const json& j) { out.push_back(signal_from_json(j)); });
  return out;
}

inline std::vector<FxQuote> parse_quotes(std::string_view text) {
  std::vector<FxQuote> out;
  for_each_ndjson(text, "quotes", [&](const json& j) {
    FxQuote q = quote_from_json(j);
    if (!q.usd_rate.is_positive()) throw DataError("usd_rate must be positive");
    out.push_back(std::move(q));
  });
  return out;
}

/// One ERC721 metadata document per line.
inline std::vector<Parcel> parse_parcel_documents(PlatformId platform, std::string_view text) {
  std::vector<Parcel> out;
  for_each_ndjson(text, "parcels", [&](const json& doc) { out.push_back(parse_parcel_metadata(platform, parse_erc721(doc))); });
  return out;
}

inline std::string parcels_to_documents(const std::vector<Parcel>& parcels) {
  std::string out;
  for (const auto& p : parcels) out += parcel_to_metadata(p).dump() + "\n";
  return out;
}

}  // namespace metaland
