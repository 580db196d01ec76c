#pragma once

#include <string>
#include <vector>

#include "metaland.hpp"

/// Structural checks for the HTTP API response bodies.
namespace api_contract {

using nlohmann::json;

class Checker {
 public:
  explicit Checker(std::string where) : where_(std::move(where)) {}

  const std::vector<std::string>& problems() const { return problems_; }

  void fail(const std::string& path, const std::string& what) { problems_.push_back(where_ + " " + path + ": " + what); }

  const json* field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) {
      fail(path, "not an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      fail(path + "." + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  void string(const json& obj, const std::string& path, const char* key, bool nullable = false) {
    if (const json* v = field(obj, path, key); v && !(v->is_string() || (nullable && v->is_null())))
      fail(path + "." + key, "expected string");
  }
  void number(const json& obj, const std::string& path, const char* key, bool nullable = false) {
    if (const json* v = field(obj, path, key); v && !(v->is_number() || (nullable && v->is_null())))
      fail(path + "." + key, "expected number");
  }
  void count(const json& obj, const std::string& path, const char* key) {
    if (const json* v = field(obj, path, key); v && !v->is_number_unsigned()) fail(path + "." + key, "expected unsigned integer");
  }
  void decimal(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key);
    if (!v) return;
    if (!v->is_string()) return fail(path + "." + key, "expected decimal string");
    try {
      metaland::Decimal::parse(v->get<std::string>());
    } catch (const metaland::Error&) {
      fail(path + "." + key, "malformed decimal");
    }
  }
  void day(const json& obj, const std::string& path, const char* key, bool nullable = false) {
    const json* v = field(obj, path, key);
    if (!v || (nullable && v->is_null())) return;
    try {
      metaland::parse_day(v->get<std::string>());
    } catch (const std::exception&) {
      fail(path + "." + key, "expected YYYY-MM-DD");
    }
  }
  const json* array(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key);
    if (v && !v->is_array()) {
      fail(path + "." + key, "expected array");
      return nullptr;
    }
    return v;
  }
  void platform(const json& obj, const std::string& path) {
    const json* v = field(obj, path, "platform");
    if (!v) return;
    try {
      metaland::parse_platform(v->get<std::string>());
    } catch (const std::exception&) {
      fail(path + ".platform", "unknown platform");
    }
  }

  void parcel(const json& p, const std::string& path) {
    platform(p, path);
    count(p, path, "token_id");
    for (const char* k : {"x", "y"})
      if (const json* v = field(p, path, k); v && !v->is_number_integer()) fail(path + "." + k, "expected integer");
    string(p, path, "estate_id", true);
    number(p, path, "distance_to_nearest_poi", true);
    if (const json* g = field(p, path, "geometry")) string(*g, path + ".geometry", "kind");
  }

  void trade(const json& t, const std::string& path) {
    platform(t, path);
    count(t, path, "token_id");
    string(t, path, "timestamp");
    string(t, path, "chain");
    string(t, path, "exchange");
    string(t, path, "currency");
    decimal(t, path, "amount_crypto");
    decimal(t, path, "amount_usd");
    string(t, path, "buyer");
    string(t, path, "seller");
    if (const json* v = field(t, path, "economic"); v && !v->is_boolean()) fail(path + ".economic", "expected boolean");
  }

  void params(const json& p, const std::string& path) {
    for (const char* k : {"n_trees", "max_depth", "min_leaf"}) count(p, path, k);
    for (const char* k : {"learning_rate", "subsample", "colsample", "lambda"}) number(p, path, k);
    string(p, path, "target_transform");
  }

 private:
  std::string where_;
  std::vector<std::string> problems_;
};

enum class Endpoint { platforms, parcels, parcel, trades, aggregates, correlations, view, report };

/// Problems found in `body` for the given endpoint; empty when it conforms.
inline std::vector<std::string> check(Endpoint e, const std::string& where, const std::string& body) {
  Checker c(where);
  json j;
  try {
    j = json::parse(body);
  } catch (const std::exception& ex) {
    c.fail("$", std::string("invalid JSON: ") + ex.what());
    return c.problems();
  }
  switch (e) {
    case Endpoint::platforms: {
      if (const json* ps = c.array(j, "$", "platforms"))
        for (std::size_t i = 0; i < ps->size(); ++i) {
          const std::string path = "$.platforms[" + std::to_string(i) + "]";
          const json& p = (*ps)[i];
          c.platform(p, path);
          c.day(p, path, "first_day", true);
          c.day(p, path, "last_day", true);
          c.count(p, path, "parcel_count");
          c.count(p, path, "trade_count");
          if (const json* vs = c.array(p, path, "views"))
            for (const auto& v : *vs)
              if (!v.is_string()) c.fail(path + ".views", "expected strings");
        }
      if (const json* d = c.field(j, "$", "digest"); d && !(d->is_string() && d->get<std::string>().size() == 64))
        c.fail("$.digest", "expected 64 hex characters");
      break;
    }
    case Endpoint::parcels: {
      c.platform(j, "$");
      if (const json* b = c.field(j, "$", "bbox"); b && !(b->is_null() || (b->is_array() && b->size() == 4)))
        c.fail("$.bbox", "expected null or 4 integers");
      if (const json* ps = c.array(j, "$", "parcels"))
        for (std::size_t i = 0; i < ps->size(); ++i) c.parcel((*ps)[i], "$.parcels[" + std::to_string(i) + "]");
      break;
    }
    case Endpoint::parcel: {
      if (const json* p = c.field(j, "$", "parcel")) c.parcel(*p, "$.parcel");
      if (const json* t = c.field(j, "$", "last_trade"); t && !t->is_null()) c.trade(*t, "$.last_trade");
      if (const json* l = c.field(j, "$", "current_listing"); l && !l->is_null()) {
        c.platform(*l, "$.current_listing");
        c.decimal(*l, "$.current_listing", "price_usd");
        c.day(*l, "$.current_listing", "observed_date");
      }
      c.count(j, "$", "flip_count");
      c.number(j, "$", "fair_value", true);
      break;
    }
    case Endpoint::trades: {
      c.platform(j, "$");
      c.string(j, "$", "from", true);
      c.string(j, "$", "to", true);
      if (const json* ts = c.array(j, "$", "trades"))
        for (std::size_t i = 0; i < ts->size(); ++i) c.trade((*ts)[i], "$.trades[" + std::to_string(i) + "]");
      break;
    }
    case Endpoint::aggregates: {
      c.platform(j, "$");
      c.string(j, "$", "granularity");
      c.string(j, "$", "group_by");
      if (const json* rows = c.array(j, "$", "rows"))
        for (std::size_t i = 0; i < rows->size(); ++i) {
          const std::string path = "$.rows[" + std::to_string(i) + "]";
          const json& r = (*rows)[i];
          c.platform(r, path);
          c.string(r, path, "granularity");
          c.day(r, path, "period_start");
          c.string(r, path, "period");
          c.string(r, path, "group", true);
          c.number(r, path, "avg_price_usd");
          c.decimal(r, path, "volume_usd");
          c.count(r, path, "tx_count");
        }
      break;
    }
    case Endpoint::correlations: {
      c.platform(j, "$");
      const json* names = c.array(j, "$", "names");
      const json* values = c.array(j, "$", "values");
      c.array(j, "$", "undefined");
      if (names && values) {
        if (values->size() != names->size()) c.fail("$.values", "row count differs from names");
        for (std::size_t r = 0; r < values->size(); ++r) {
          const json& row = (*values)[r];
          if (!row.is_array() || row.size() != names->size()) {
            c.fail("$.values[" + std::to_string(r) + "]", "not a full row");
            continue;
          }
          for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k].is_null()) continue;
            if (!row[k].is_number() || row[k].get<double>() < -1.0 || row[k].get<double>() > 1.0)
              c.fail("$.values[" + std::to_string(r) + "][" + std::to_string(k) + "]", "expected null or a number in [-1, 1]");
          }
        }
      }
      break;
    }
    case Endpoint::view: {
      c.platform(j, "$");
      c.string(j, "$", "view_id");
      c.day(j, "$", "generated_at");
      if (const json* legend = c.array(j, "$", "legend")) {
        if (!legend->empty() && legend->size() != metaland::kColorBins) c.fail("$.legend", "expected 0 or 10 bounds");
        for (const auto& v : *legend)
          if (!v.is_number()) c.fail("$.legend", "expected numbers");
      }
      if (const json* es = c.array(j, "$", "entries"))
        for (std::size_t i = 0; i < es->size(); ++i) {
          const std::string path = "$.entries[" + std::to_string(i) + "]";
          const json& e = (*es)[i];
          c.count(e, path, "token_id");
          c.number(e, path, "x");
          c.number(e, path, "y");
          c.number(e, path, "metric", true);
          const json* color = c.field(e, path, "color");
          const json* metric = c.field(e, path, "metric");
          if (color && metric) {
            if (color->is_null() != metric->is_null()) c.fail(path, "color and metric must be null together");
            if (color->is_number_integer() && (color->get<int>() < 0 || color->get<int>() >= static_cast<int>(metaland::kColorBins)))
              c.fail(path + ".color", "out of range");
          }
        }
      try {
        metaland::parse_view(body);
      } catch (const metaland::Error& ex) {
        c.fail("$", ex.what());
      }
      break;
    }
    case Endpoint::report: {
      c.platform(j, "$");
      if (const json* ev = c.field(j, "$", "eval")) {
        for (const char* k : {"train_accuracy_pct", "test_accuracy_pct", "mae_usd", "rmse_usd"}) c.number(*ev, "$.eval", k);
        c.count(*ev, "$.eval", "n_train");
        c.count(*ev, "$.eval", "n_test");
      }
      if (const json* imp = c.array(j, "$", "importance"))
        for (std::size_t i = 0; i < imp->size(); ++i) {
          const std::string path = "$.importance[" + std::to_string(i) + "]";
          c.string((*imp)[i], path, "feature");
          c.count((*imp)[i], path, "index");
          c.count((*imp)[i], path, "split_count");
          c.number((*imp)[i], path, "share");
        }
      if (const json* groups = c.array(j, "$", "group_importance"))
        for (const auto& g : *groups) {
          c.string(g, "$.group_importance[]", "group");
          c.number(g, "$.group_importance[]", "share");
        }
      if (const json* p = c.field(j, "$", "params")) c.params(*p, "$.params");
      if (const json* s = c.field(j, "$", "search")) {
        if (const json* b = c.field(*s, "$.search", "best")) c.params(*b, "$.search.best");
        c.number(*s, "$.search", "best_rmse");
        if (const json* trials = c.array(*s, "$.search", "trials"))
          for (const auto& t : *trials) {
            c.count(t, "$.search.trials[]", "index");
            c.number(t, "$.search.trials[]", "rmse");
            if (const json* tp = c.field(t, "$.search.trials[]", "params")) c.params(*tp, "$.search.trials[].params");
          }
      }
      break;
    }
  }
  return c.problems();
}

struct Request {
  std::string path;
  metaland::QueryParams query;
  Endpoint endpoint;
};

/// Every endpoint and query form served for `snapshot`.
inline std::vector<Request> all_requests(const metaland::Snapshot& snapshot) {
  using namespace metaland;
  std::vector<Request> out{{"/v1/platforms", {}, Endpoint::platforms}};
  for (const auto& [p, a] : snapshot.platforms) {
    const std::string base = "/v1/" + std::string(to_string(p));
    out.push_back({base + "/parcels", {}, Endpoint::parcels});
    out.push_back({base + "/parcels", {{"bbox", "-2,-2,2,2"}}, Endpoint::parcels});
    for (std::size_t i = 0; i < a.dataset.parcels.size(); i += std::max<std::size_t>(1, a.dataset.parcels.size() / 5))
      out.push_back({base + "/parcels/" + std::to_string(a.dataset.parcels[i].token_id), {}, Endpoint::parcel});
    out.push_back({base + "/trades", {}, Endpoint::trades});
    const auto [lo, hi] = a.date_range();
    out.push_back({base + "/trades", {{"from", format_day(lo)}, {"to", format_day(lo + std::chrono::days{6})}}, Endpoint::trades});
    out.push_back({base + "/trades", {{"from", format_timestamp(Timestamp(hi))}}, Endpoint::trades});
    for (Granularity g : kAllGranularities)
      for (GroupBy by : kAllGroupings)
        out.push_back({base + "/aggregates", {{"granularity", std::string(to_string(g))}, {"group_by", std::string(to_string(by))}},
                       Endpoint::aggregates});
    out.push_back({base + "/aggregates", {}, Endpoint::aggregates});
    out.push_back({base + "/correlations", {}, Endpoint::correlations});
    for (const auto& [v, body] : a.views) out.push_back({base + "/views/" + std::string(to_string(v)), {}, Endpoint::view});
    out.push_back({base + "/model/report", {}, Endpoint::report});
  }
  return out;
}

}  // namespace api_contract
