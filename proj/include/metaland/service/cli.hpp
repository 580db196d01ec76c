#pragma once

#include <algorithm>
#include <atomic>
#include <csignal>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "metaland/ingest/synthetic.hpp"
#include "metaland/service/pipeline.hpp"
#include "metaland/service/server.hpp"

namespace metaland {

namespace detail {

/// Parses a user-supplied name; a bad name is a usage error.
template <typename Fn>
auto user_value(Fn&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const ParseError& e) {
    throw InvalidArgument(e.what());
  }
}

inline const PlatformArtifacts& require_platform(const Snapshot& s, const std::string& name) {
  const PlatformId id = user_value([&] { return parse_platform(name); });
  const PlatformArtifacts* a = s.find(id);
  if (a == nullptr) throw InvalidArgument("platform '" + name + "' is not in the snapshot");
  return *a;
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << text;
  else
    write_file(out_path, text);
}

inline std::string csv_aggregates(const PlatformArtifacts& a, std::optional<Granularity> g, std::optional<GroupBy> by) {
  std::ostringstream os;
  os << "platform,granularity,group_by,period,period_start,group,avg_price_usd,volume_usd,tx_count\n";
  for (const auto& [key, rows] : a.aggregates) {
    if ((g && key.first != *g) || (by && key.second != *by)) continue;
    for (const auto& r : rows)
      os << to_string(r.platform) << ',' << to_string(key.first) << ',' << to_string(key.second) << ',' << r.period << ','
         << format_day(r.period_start) << ',' << csv_field(r.group.value_or("")) << ',' << format_number(r.avg_price_usd)
         << ',' << r.volume_usd.to_string() << ',' << r.tx_count << '\n';
  }
  return os.str();
}

inline std::string csv_trades(const PlatformArtifacts& a) {
  std::ostringstream os;
  os << "platform,token_id,timestamp,chain,exchange,currency,amount_crypto,amount_usd,buyer,seller\n";
  for (const auto& t : a.kept)
    os << to_string(t.platform) << ',' << t.token_id << ',' << format_timestamp(t.timestamp) << ',' << to_string(t.chain)
       << ',' << csv_field(t.exchange) << ',' << csv_field(t.currency) << ',' << t.amount_crypto.to_string() << ','
       << t.amount_usd.to_string() << ',' << csv_field(t.buyer) << ',' << csv_field(t.seller) << '\n';
  return os.str();
}

inline std::string csv_filter(const PlatformArtifacts& a) {
  const FilterReport& r = a.filter;
  std::ostringstream os;
  os << "platform,considered_volume_usd,discarded_volume_usd,considered_count,discarded_count,threshold_usd\n"
     << to_string(r.platform) << ',' << r.considered_volume_usd.to_string() << ',' << r.discarded_volume_usd.to_string()
     << ',' << r.considered_count << ',' << r.discarded_count << ',' << r.threshold_usd.to_string() << '\n';
  return os.str();
}

inline std::string csv_correlations(const PlatformArtifacts& a) {
  const CorrelationMatrix& m = a.correlations;
  std::ostringstream os;
  os << "series";
  for (const auto& n : m.names) os << ',' << csv_field(n);
  os << '\n';
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    os << csv_field(m.names[i]);
    for (const auto& v : m.values[i]) os << ',' << (v ? format_number(*v) : "");
    os << '\n';
  }
  return os.str();
}

inline std::string csv_importance(const PlatformArtifacts& a) {
  std::ostringstream os;
  os << "feature,group,split_count,share\n";
  for (const auto& fi : feature_importance(a.model))
    os << fi.feature << ',' << a.model.schema.features[fi.index].group << ',' << fi.split_count << ','
       << format_number(fi.share) << '\n';
  return os.str();
}

inline std::string csv_search(const PlatformArtifacts& a) {
  std::ostringstream os;
  os << "trial,n_trees,max_depth,learning_rate,min_leaf,subsample,colsample,lambda,rmse\n";
  for (const auto& t : a.search.trials)
    os << t.index << ',' << t.params.n_trees << ',' << t.params.max_depth << ',' << format_number(t.params.learning_rate)
       << ',' << t.params.min_leaf << ',' << format_number(t.params.subsample) << ','
       << format_number(t.params.colsample) << ',' << format_number(t.params.lambda) << ',' << format_number(t.rmse)
       << '\n';
  return os.str();
}

inline std::string csv_parcels(const PlatformArtifacts& a) {
  std::ostringstream os;
  os << "token_id,x,y,geometry,estate_id,distance_to_nearest_poi\n";
  for (const auto& p : a.dataset.parcels)
    os << p.token_id << ',' << p.x << ',' << p.y << ',' << to_string(geometry_kind(p.geometry)) << ','
       << csv_field(p.estate_id.value_or("")) << ','
       << (p.distance_to_nearest_poi ? format_number(*p.distance_to_nearest_poi) : "") << '\n';
  return os.str();
}

inline std::vector<double> read_feature_file(const std::string& path, const FeatureSchema& schema) {
  const auto j = json_fields::parse_document(read_file(path), path);
  std::vector<double> x;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw ParseError(path + ": feature values must be numbers");
      x.push_back(v.get<double>());
    }
  } else if (j.is_object()) {
    for (const auto& f : schema.features) x.push_back(json_fields::get_double(j, f.name, path));
  } else {
    throw ParseError(path + ": expected an array or an object of features");
  }
  if (x.size() != schema.size())
    throw DataError(path + ": expected " + std::to_string(schema.size()) + " features, got " + std::to_string(x.size()));
  return x;
}

inline std::atomic<ApiServer*> g_serving{nullptr};

}  // namespace detail

/// Exit codes: 0 success, 1 data error, 2 usage error.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Metaverse land market analytics", "metaland"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  std::vector<std::string> manifests;
  std::string snapshot_dir;
  std::string out_path;
  std::string platform;
  int port = 8080;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-platform fixture set");
  SyntheticConfig scfg;
  std::vector<std::string> synth_platforms;
  synth->add_option("--seed", seed, "Generator seed");
  synth->add_option("--out", out_path, "Output directory")->required();
  synth->add_option("--grid", scfg.grid_size, "Parcels per grid side");
  synth->add_option("--pois", scfg.n_pois, "Points of interest");
  synth->add_option("--days", scfg.n_days, "Days of history");
  synth->add_option("--trades", scfg.n_trades, "Economic trades per platform");
  synth->add_option("--noise", scfg.noise, "Lognormal price noise sigma");
  synth->add_option("--platform", synth_platforms, "Restrict to these platforms");

  auto* build = app.add_subcommand("build", "Build a snapshot from fixture manifests");
  PipelineConfig pcfg;
  bool quiet = false;
  build->add_option("--manifest", manifests, "Platform or index manifest (repeatable)")->required();
  build->add_option("--seed", seed, "Pipeline seed");
  build->add_option("--snapshot,--out", snapshot_dir, "Snapshot directory to write")->required();
  build->add_option("--trials", pcfg.search_trials, "Randomized search trials");
  build->add_option("--percentile", pcfg.percentile, "Price filter percentile");
  build->add_flag("--quiet", quiet, "No progress output");

  auto* serve = app.add_subcommand("serve", "Serve a snapshot over HTTP");
  ServerOptions sopt;
  serve->add_option("--snapshot", snapshot_dir, "Snapshot directory")->required();
  serve->add_option("--port", port, "Port");
  serve->add_option("--host", sopt.host, "Bind address");
  serve->add_option("--cors-origin", sopt.cors_origin, "Allowed browser origin (empty disables CORS)");

  auto* exp = app.add_subcommand("export", "Dump an analytics table as CSV");
  std::string table;
  std::string granularity;
  std::string group_by;
  exp->add_option("table", table, "aggregates | trades | filter | correlations | importance | search | parcels")
      ->required()
      ->check(CLI::IsMember({"aggregates", "trades", "filter", "correlations", "importance", "search", "parcels"}));
  exp->add_option("--snapshot", snapshot_dir, "Snapshot directory")->required();
  exp->add_option("--platform", platform, "Platform")->required();
  exp->add_option("--granularity", granularity, "Only this granularity (aggregates)");
  exp->add_option("--group-by", group_by, "Only this grouping (aggregates)");
  exp->add_option("--out", out_path, "Output file (default stdout)");

  auto* pred = app.add_subcommand("predict", "Fair value for a parcel or a feature vector");
  std::optional<TokenId> token;
  std::string feature_file;
  pred->add_option("--snapshot", snapshot_dir, "Snapshot directory")->required();
  pred->add_option("--platform", platform, "Platform")->required();
  auto* token_opt = pred->add_option("--token", token, "Parcel token id");
  auto* feat_opt = pred->add_option("--features", feature_file, "JSON feature vector file");
  token_opt->excludes(feat_opt);

  auto* viewcmd = app.add_subcommand("view", "Write one view layer document");
  std::string view_name;
  viewcmd->add_option("--snapshot", snapshot_dir, "Snapshot directory")->required();
  viewcmd->add_option("--platform", platform, "Platform")->required();
  viewcmd->add_option("--view", view_name, "View id")->required();
  viewcmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* digest = app.add_subcommand("digest", "Print a snapshot's content digest");
  digest->add_option("--snapshot", snapshot_dir, "Snapshot directory")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (synth->parsed()) {
      if (!synth_platforms.empty()) {
        scfg.platforms.clear();
        for (const auto& p : synth_platforms) scfg.platforms.push_back(detail::user_value([&] { return parse_platform(p); }));
      }
      const auto index = write_synthetic(generate_synthetic(seed, scfg), out_path);
      out << index.string() << "\n";
    } else if (build->parsed()) {
      std::vector<FixtureManifest> all;
      for (const auto& m : manifests)
        for (auto& fm : load_manifests(m)) all.push_back(std::move(fm));
      ProgressFn progress;
      if (!quiet) progress = [&err](std::string_view msg) { err << msg << "\n"; };
      const Snapshot s = build_snapshot(all, pcfg, seed, progress);
      save_snapshot(s, snapshot_dir);
      out << snapshot_digest(s) << "\n";
    } else if (serve->parsed()) {
      sopt.port = port;
      auto snapshot = std::make_shared<const Snapshot>(load_snapshot(snapshot_dir));
      ApiServer server(snapshot, sopt);
      detail::g_serving = &server;
      std::signal(SIGINT, [](int) {
        if (auto* s = detail::g_serving.load()) s->stop();
      });
      std::signal(SIGTERM, [](int) {
        if (auto* s = detail::g_serving.load()) s->stop();
      });
      err << "serving " << snapshot_dir << " on " << sopt.host << ":" << port << "\n";
      server.listen();
      detail::g_serving = nullptr;
    } else if (exp->parsed()) {
      const Snapshot s = load_snapshot(snapshot_dir);
      const PlatformArtifacts& a = detail::require_platform(s, platform);
      std::string csv;
      if (table == "aggregates") {
        std::optional<Granularity> g;
        std::optional<GroupBy> by;
        if (!granularity.empty()) g = detail::user_value([&] { return parse_granularity(granularity); });
        if (!group_by.empty()) by = detail::user_value([&] { return parse_group_by(group_by); });
        csv = detail::csv_aggregates(a, g, by);
      } else if (table == "trades") {
        csv = detail::csv_trades(a);
      } else if (table == "filter") {
        csv = detail::csv_filter(a);
      } else if (table == "correlations") {
        csv = detail::csv_correlations(a);
      } else if (table == "importance") {
        csv = detail::csv_importance(a);
      } else if (table == "search") {
        csv = detail::csv_search(a);
      } else {
        csv = detail::csv_parcels(a);
      }
      detail::emit(csv, out_path, out);
    } else if (pred->parsed()) {
      if (!token && feature_file.empty()) throw InvalidArgument("predict needs --token or --features");
      const Snapshot s = load_snapshot(snapshot_dir);
      const PlatformArtifacts& a = detail::require_platform(s, platform);
      nlohmann::json result{{"platform", to_string(a.dataset.platform)}};
      if (token) {
        const FeatureContext ctx(a.dataset, a.kept);
        const Day day = view_reference_day(ctx);
        const auto x = ctx.features_at(ctx.parcel(*token), day, a.model.schema);
        result["token_id"] = *token;
        result["date"] = format_day(day);
        result["fair_value"] = predict(a.model, x);
      } else {
        result["fair_value"] = predict(a.model, detail::read_feature_file(feature_file, a.model.schema));
      }
      out << result.dump() << "\n";
    } else if (viewcmd->parsed()) {
      const Snapshot s = load_snapshot(snapshot_dir);
      const PlatformArtifacts& a = detail::require_platform(s, platform);
      const ViewId id = detail::user_value([&] { return parse_view_id(view_name); });
      auto it = a.views.find(id);
      if (it == a.views.end()) throw InvalidArgument("view '" + view_name + "' is not available on " + platform);
      detail::emit(it->second, out_path, out);
    } else if (digest->parsed()) {
      out << snapshot_digest(load_snapshot(snapshot_dir)) << "\n";
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const PipelineError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace metaland
