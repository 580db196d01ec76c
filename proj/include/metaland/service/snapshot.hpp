#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "metaland/analytics/aggregate.hpp"
#include "metaland/analytics/correlation.hpp"
#include "metaland/analytics/filter.hpp"
#include "metaland/core/types.hpp"
#include "metaland/ingest/files.hpp"
#include "metaland/ingest/manifest.hpp"
#include "metaland/service/codec.hpp"
#include "metaland/service/digest.hpp"
#include "metaland/valuation/model_io.hpp"
#include "metaland/viewgen/view.hpp"

namespace metaland {

inline constexpr int kSnapshotSchemaVersion = 1;

struct PipelineConfig {
  double percentile = 0.99;
  double split_ratio = 0.8;
  std::size_t search_trials = 30;
  SearchSpace space;
  int seasonal_period = 7;

  bool operator==(const PipelineConfig&) const = default;
};

using AggregateKey = std::pair<Granularity, GroupBy>;

/// Everything built for one platform.
struct PlatformArtifacts {
  Dataset dataset;
  std::vector<Trade> kept;  // filtered economic trades
  FilterReport filter;
  std::map<AggregateKey, std::vector<AggregateRow>> aggregates;
  CorrelationMatrix correlations;
  GbtModel model;
  EvalReport eval;
  SearchResult search;
  std::map<ViewId, std::string> views;  // serialized layer documents

  std::pair<Day, Day> date_range() const {
    Day lo{}, hi{};
    bool any = false;
    for (const auto& t : dataset.trades) {
      const Day d = day_of(t.timestamp);
      if (!any || d < lo) lo = d;
      if (!any || d > hi) hi = d;
      any = true;
    }
    return {lo, hi};
  }
};

/// Immutable build output. `files` holds the persisted bytes (relative path
/// to contents); the parsed members are decoded from them.
struct Snapshot {
  int schema_version = kSnapshotSchemaVersion;
  std::uint64_t seed = 0;
  PipelineConfig config;
  std::map<PlatformId, PlatformArtifacts> platforms;
  std::map<std::string, std::string> files;

  const PlatformArtifacts* find(PlatformId p) const {
    auto it = platforms.find(p);
    return it == platforms.end() ? nullptr : &it->second;
  }
};

inline std::string aggregate_key_label(const AggregateKey& k) {
  return std::string(to_string(k.first)) + "/" + std::string(to_string(k.second));
}

inline nlohmann::json to_json(const SearchSpace& s) {
  return {{"n_trees", {s.n_trees.first, s.n_trees.second}},
          {"max_depth", {s.max_depth.first, s.max_depth.second}},
          {"learning_rate", s.learning_rate},
          {"min_leaf", {s.min_leaf.first, s.min_leaf.second}},
          {"subsample", s.subsample},
          {"colsample", s.colsample},
          {"lambda", s.lambda},
          {"target_transform", to_string(s.target_transform)}};
}

inline SearchSpace search_space_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "search space";
  auto range = [&](std::string_view key) {
    const auto& r = require(j, key, ctx);
    if (!r.is_array() || r.size() != 2) throw ParseError("search space: '" + std::string(key) + "' must be [lo, hi]");
    return std::pair<int, int>{r[0].get<int>(), r[1].get<int>()};
  };
  auto list = [&](std::string_view key) { return require(j, key, ctx).get<std::vector<double>>(); };
  SearchSpace s;
  s.n_trees = range("n_trees");
  s.max_depth = range("max_depth");
  s.learning_rate = list("learning_rate");
  s.min_leaf = range("min_leaf");
  s.subsample = list("subsample");
  s.colsample = list("colsample");
  s.lambda = list("lambda");
  s.target_transform = parse_target_transform(get_string(j, "target_transform", ctx));
  return s;
}

inline nlohmann::json to_json(const PipelineConfig& c) {
  return {{"percentile", c.percentile},
          {"split_ratio", c.split_ratio},
          {"search_trials", c.search_trials},
          {"search_space", to_json(c.space)},
          {"seasonal_period", c.seasonal_period}};
}

inline PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  constexpr std::string_view ctx = "config";
  PipelineConfig c;
  c.percentile = get_double(j, "percentile", ctx);
  c.split_ratio = get_double(j, "split_ratio", ctx);
  c.search_trials = get_uint(j, "search_trials", ctx);
  c.space = search_space_from_json(require(j, "search_space", ctx));
  c.seasonal_period = static_cast<int>(get_int(j, "seasonal_period", ctx));
  return c;
}

/// Model report document: evaluation, importance and the search log.
inline nlohmann::json report_json(const PlatformArtifacts& a) {
  nlohmann::json importance = nlohmann::json::array();
  for (const auto& fi : feature_importance(a.model)) importance.push_back(to_json(fi));
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& [g, share] : group_importance(a.model)) groups.push_back({{"group", g}, {"share", share}});
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : a.search.trials) trials.push_back(to_json(t));
  return {{"platform", to_string(a.dataset.platform)},
          {"eval", to_json(a.eval)},
          {"importance", importance},
          {"group_importance", groups},
          {"params", to_json(a.model.params)},
          {"search", {{"best", to_json(a.search.best)}, {"best_rmse", a.search.best_rmse}, {"trials", trials}}}};
}

namespace detail {

inline std::string platform_dir(PlatformId p) { return std::string(to_string(p)) + "/"; }

inline void encode_platform(const PlatformArtifacts& a, std::map<std::string, std::string>& files) {
  const std::string dir = platform_dir(a.dataset.platform);
  for (auto& [name, text] : fixture_files(a.dataset)) files[dir + "dataset/" + name] = std::move(text);
  files[dir + "filter.json"] = to_json(a.filter).dump(1) + "\n";
  nlohmann::json aggs = nlohmann::json::object();
  for (const auto& [key, rows] : a.aggregates) aggs[aggregate_key_label(key)] = to_json(rows);
  files[dir + "aggregates.json"] = aggs.dump() + "\n";
  files[dir + "correlations.json"] = to_json(a.correlations).dump(1) + "\n";
  files[dir + "model.json"] = serialize_model(a.model);
  files[dir + "report.json"] = report_json(a).dump(1) + "\n";
  for (const auto& [view, body] : a.views) files[dir + "views/" + std::string(to_string(view)) + ".json"] = body;
}

inline const std::string& file_at(const std::map<std::string, std::string>& files, const std::string& path) {
  auto it = files.find(path);
  if (it == files.end()) throw DataError("snapshot: missing file " + path);
  return it->second;
}

inline PlatformArtifacts decode_platform(PlatformId p, const std::map<std::string, std::string>& files,
                                         const PipelineConfig& config) {
  const std::string dir = platform_dir(p);
  PlatformArtifacts a;
  std::array<std::string_view, 6> texts;
  std::array<std::string, 6> names;
  const std::array<std::string_view, 6> base{"parcels", "trades", "listings", "traffic", "signals", "quotes"};
  for (std::size_t i = 0; i < 6; ++i) {
    names[i] = dir + "dataset/" + std::string(base[i]) + ".ndjson";
    texts[i] = file_at(files, names[i]);
  }
  a.dataset = parse_dataset(p, texts, names);
  auto doc = [&](const std::string& name) { return json_fields::parse_document(file_at(files, dir + name), dir + name); };
  try {
    a.filter = filter_report_from_json(doc("filter.json"));
    const auto aggregates = doc("aggregates.json");
    for (const auto& [label, rows] : aggregates.items()) {
      const auto slash = label.find('/');
      if (slash == std::string::npos) throw ParseError("aggregates: bad key " + label);
      const AggregateKey key{parse_granularity(label.substr(0, slash)), parse_group_by(label.substr(slash + 1))};
      auto& out = a.aggregates[key];
      for (const auto& r : rows) out.push_back(aggregate_row_from_json(r));
    }
    a.correlations = correlation_from_json(doc("correlations.json"));
    a.model = parse_model(file_at(files, dir + "model.json"));
    const auto report = doc("report.json");
    a.eval = eval_report_from_json(json_fields::require(report, "eval", "report"));
    const auto& search = json_fields::require(report, "search", "report");
    a.search.best = params_from_json(json_fields::require(search, "best", "report"));
    a.search.best_rmse = json_fields::get_double(search, "best_rmse", "report");
    for (const auto& t : json_fields::require(search, "trials", "report")) a.search.trials.push_back(search_trial_from_json(t));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(dir + ": " + e.what());
  }
  for (ViewId v : platform_views(p)) a.views[v] = file_at(files, dir + "views/" + std::string(to_string(v)) + ".json");

  const auto economic = economic_trades(a.dataset.trades);
  auto filtered = filter_trades(economic, config.percentile, p);
  if (!(filtered.report == a.filter)) throw DataError("snapshot: stored filter report does not match its dataset");
  a.kept = std::move(filtered.kept);
  return a;
}

}  // namespace detail

/// Combined digest: SHA-256 over the sorted "path NUL file-digest LF" lines.
inline std::string snapshot_digest(const std::map<std::string, std::string>& files) {
  std::string manifest;
  for (const auto& [path, body] : files) manifest += path + '\0' + sha256_hex(body) + '\n';
  return sha256_hex(manifest);
}

inline std::string snapshot_digest(const Snapshot& s) { return snapshot_digest(s.files); }

/// Fills `s.files` from the parsed members.
inline void encode_snapshot(Snapshot& s) {
  s.files.clear();
  s.files["config.json"] = nlohmann::json{{"schema_version", s.schema_version},
                                          {"seed", s.seed},
                                          {"pipeline", to_json(s.config)}}
                               .dump(1) +
                           "\n";
  for (const auto& [p, a] : s.platforms) detail::encode_platform(a, s.files);
}

/// Index document written next to the files.
inline nlohmann::json snapshot_index(const Snapshot& s) {
  nlohmann::json files = nlohmann::json::object();
  for (const auto& [path, body] : s.files) files[path] = sha256_hex(body);
  nlohmann::json platforms = nlohmann::json::array();
  for (const auto& [p, a] : s.platforms) platforms.push_back(to_string(p));
  return {{"schema_version", s.schema_version}, {"platforms", platforms}, {"files", files}, {"digest", snapshot_digest(s)}};
}

/// Writes the snapshot under `dir`, replacing any previous one. The new tree
/// is staged in a sibling directory and renamed into place.
inline void save_snapshot(const Snapshot& s, const fs::path& dir) {
  const fs::path target = fs::absolute(dir).lexically_normal();
  const fs::path staging = target.string() + ".staging";
  const fs::path retired = target.string() + ".old";
  fs::remove_all(staging);
  for (const auto& [path, body] : s.files) write_file(staging / path, body);
  write_file(staging / "snapshot.json", snapshot_index(s).dump(1) + "\n");
  fs::remove_all(retired);
  if (fs::exists(target)) fs::rename(target, retired);
  fs::rename(staging, target);
  fs::remove_all(retired);
}

inline Snapshot load_snapshot(const fs::path& dir) {
  using namespace json_fields;
  const auto index = parse_document(read_file(dir / "snapshot.json"), "snapshot.json");
  const auto version = get_int(index, "schema_version", "snapshot");
  if (version != kSnapshotSchemaVersion) throw ParseError("snapshot: unsupported schema_version " + std::to_string(version));
  Snapshot s;
  for (const auto& [path, digest] : require(index, "files", "snapshot").items()) {
    if (path.find("..") != std::string::npos || (!path.empty() && path.front() == '/'))
      throw ParseError("snapshot: invalid file path " + path);
    std::string body = read_file(dir / path);
    if (!digest.is_string() || sha256_hex(body) != digest.get<std::string>())
      throw DataError("snapshot: digest mismatch for " + path);
    s.files.emplace(path, std::move(body));
  }
  if (snapshot_digest(s.files) != get_string(index, "digest", "snapshot")) throw DataError("snapshot: combined digest mismatch");

  const auto config = parse_document(detail::file_at(s.files, "config.json"), "config.json");
  s.schema_version = static_cast<int>(get_int(config, "schema_version", "config"));
  s.seed = get_uint(config, "seed", "config");
  s.config = pipeline_config_from_json(require(config, "pipeline", "config"));
  for (const auto& p : require(index, "platforms", "snapshot")) {
    const PlatformId id = parse_platform(p.get<std::string>());
    s.platforms.emplace(id, detail::decode_platform(id, s.files, s.config));
  }
  return s;
}

}  // namespace metaland
