#include <gtest/gtest.h>

#include <chrono>
#include <sstream>

#include "api_contract.hpp"
#include "httplib.h"
#include "metaland/service/cli.hpp"
#include "metaland/service/server.hpp"
#include "support.hpp"

using namespace metaland;
using namespace testing_support;

namespace {

struct Built {
  TempDir dir{"service"};
  fs::path index;
  std::shared_ptr<const Snapshot> snapshot;
};

/// One small five-platform build shared by the whole suite.
const Built& built() {
  static Built* b = [] {
    auto* out = new Built;
    out->index = write_synthetic(generate_synthetic(7, small_config()), out->dir / "fixtures");
    out->snapshot = std::make_shared<const Snapshot>(build_snapshot(load_manifests(out->index), quick_pipeline(), 7));
    return out;
  }();
  return *b;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

TEST(Snapshot, BuildsEveryPlatform) {
  const Snapshot& s = *built().snapshot;
  EXPECT_EQ(s.platforms.size(), 5u);
  for (const auto& [p, a] : s.platforms) {
    EXPECT_FALSE(a.model.trees.empty()) << to_string(p);
    EXPECT_EQ(a.aggregates.size(), kAllGranularities.size() * kAllGroupings.size()) << to_string(p);
    EXPECT_EQ(a.views.size(), platform_views(p).size()) << to_string(p);
    EXPECT_EQ(a.search.trials.size(), quick_pipeline().search_trials) << to_string(p);
  }
}

TEST(Snapshot, SaveLoadPreservesDigestAndBytes) {
  const Snapshot& s = *built().snapshot;
  TempDir dir("snap");
  save_snapshot(s, dir / "snap");
  const Snapshot loaded = load_snapshot(dir / "snap");
  EXPECT_EQ(snapshot_digest(loaded), snapshot_digest(s));
  EXPECT_EQ(loaded.files, s.files);
  EXPECT_EQ(loaded.config, s.config);
  EXPECT_EQ(loaded.seed, s.seed);

  Snapshot reencoded = loaded;
  encode_snapshot(reencoded);
  EXPECT_EQ(reencoded.files, s.files);
  for (const auto& [p, a] : s.platforms) {
    const auto& b = loaded.platforms.at(p);
    EXPECT_EQ(b.model, a.model);
    EXPECT_EQ(b.views, a.views);
    EXPECT_EQ(b.kept, a.kept);
  }
}

TEST(Snapshot, TamperedFileIsRejected) {
  TempDir dir("tamper");
  save_snapshot(*built().snapshot, dir / "snap");
  write_file(dir / "snap/config.json", "{}");
  EXPECT_THROW(load_snapshot(dir / "snap"), DataError);
}

TEST(Snapshot, SaveReplacesPreviousTree) {
  TempDir dir("replace");
  write_file(dir / "snap/stale.txt", "x");
  save_snapshot(*built().snapshot, dir / "snap");
  EXPECT_FALSE(fs::exists(dir / "snap/stale.txt"));
  EXPECT_TRUE(fs::exists(dir / "snap/snapshot.json"));
}

TEST(Pipeline, DuplicateCoordinatesFailValidation) {
  TempDir dir("dup");
  auto world = generate_synthetic(3, small_config());
  Dataset ds = world.datasets.front();
  ds.parcels[1].x = ds.parcels[0].x;
  ds.parcels[1].y = ds.parcels[0].y;
  const auto m = write_fixture(ds, dir / "bad");
  try {
    build_snapshot({m}, quick_pipeline(), 1);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "validate");
    EXPECT_NE(std::string(e.what()).find("parcel.coordinates_unique"), std::string::npos) << e.what();
  }
}

TEST(Pipeline, MalformedFixtureFailsIngest) {
  TempDir dir("ingest");
  auto world = generate_synthetic(3, small_config());
  const auto m = write_fixture(world.datasets.front(), dir / "f");
  write_file(m.trades, "{not json\n");
  try {
    build_snapshot({m}, quick_pipeline(), 1);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "ingest");
  }
}

TEST(Pipeline, ConfigAndManifestErrors) {
  const auto manifests = load_manifests(built().index);
  auto dup = manifests;
  dup.push_back(manifests.front());
  EXPECT_THROW(build_snapshot(dup, quick_pipeline(), 1), PipelineError);
  EXPECT_THROW(build_snapshot({}, quick_pipeline(), 1), PipelineError);
  auto cfg = quick_pipeline();
  cfg.search_trials = 0;
  try {
    build_snapshot(manifests, cfg, 1);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "config");
  }
}

TEST(Pipeline, RebuildIsByteIdentical) {
  auto one = load_manifests(built().index);
  one.resize(1);
  const Snapshot a = build_snapshot(one, quick_pipeline(), 11);
  const Snapshot b = build_snapshot(one, quick_pipeline(), 11);
  EXPECT_EQ(a.files, b.files);
  const Snapshot c = build_snapshot(one, quick_pipeline(), 12);
  EXPECT_NE(snapshot_digest(a), snapshot_digest(c));
}

TEST(Api, EveryEndpointMatchesContract) {
  const ApiIndex api(built().snapshot);
  const auto requests = api_contract::all_requests(*built().snapshot);
  EXPECT_GT(requests.size(), 5u * 12u);
  for (const auto& r : requests) {
    const auto t0 = std::chrono::steady_clock::now();
    const ApiResponse res = api.handle(r.path, r.query);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    ASSERT_EQ(res.status, 200) << r.path << " " << res.body;
    EXPECT_EQ(res.content_type, "application/json");
    EXPECT_LT(ms, 100.0) << r.path;
    for (const auto& problem : api_contract::check(r.endpoint, r.path, res.body)) ADD_FAILURE() << problem;
  }
}

TEST(Api, ViewBodiesAreStoredBytes) {
  const ApiIndex api(built().snapshot);
  for (const auto& [p, a] : built().snapshot->platforms)
    for (const auto& [v, body] : a.views)
      EXPECT_EQ(api.handle("/v1/" + std::string(to_string(p)) + "/views/" + std::string(to_string(v))).body, body);
}

TEST(Api, FiltersApply) {
  const ApiIndex api(built().snapshot);
  const auto& a = built().snapshot->platforms.at(PlatformId::decentraland);
  const auto all = nlohmann::json::parse(api.handle("/v1/decentraland/trades").body);
  EXPECT_EQ(all["trades"].size(), a.kept.size());

  const auto [lo, hi] = a.date_range();
  const std::string d = format_day(lo + std::chrono::days{3});
  const auto one_day = nlohmann::json::parse(api.handle("/v1/decentraland/trades", {{"from", d}, {"to", d}}).body);
  std::size_t expect = 0;
  for (const auto& t : a.kept) expect += format_day(day_of(t.timestamp)) == d;
  EXPECT_EQ(one_day["trades"].size(), expect);
  for (const auto& t : one_day["trades"]) EXPECT_EQ(t["timestamp"].get<std::string>().substr(0, 10), d);

  const auto box = nlohmann::json::parse(api.handle("/v1/decentraland/parcels", {{"bbox", "0,0,1,1"}}).body);
  std::size_t in_box = 0;
  for (const auto& p : a.dataset.parcels) in_box += p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1;
  EXPECT_EQ(box["parcels"].size(), in_box);
  EXPECT_EQ(box["bbox"], nlohmann::json({0, 0, 1, 1}));

  const auto rows = nlohmann::json::parse(api.handle("/v1/decentraland/aggregates", {{"granularity", "month"}, {"group_by", "currency"}}).body);
  EXPECT_EQ(rows["rows"].size(), a.aggregates.at({Granularity::month, GroupBy::currency}).size());
}

TEST(Api, ParcelDetailAgreesWithViews) {
  const ApiIndex api(built().snapshot);
  const auto& a = built().snapshot->platforms.at(PlatformId::sandbox);
  const auto fair = parse_view(a.views.at(ViewId::fair_value));
  const auto flips = flip_counts(a.dataset.trades);
  for (const auto& e : fair.entries) {
    const auto body = nlohmann::json::parse(api.handle("/v1/sandbox/parcels/" + std::to_string(e.token_id)).body);
    ASSERT_TRUE(e.metric.has_value());
    EXPECT_DOUBLE_EQ(body["fair_value"].get<double>(), *e.metric);
    const auto f = flips.find(e.token_id);
    EXPECT_EQ(body["flip_count"].get<std::size_t>(), f == flips.end() ? 0u : f->second);
  }
}

TEST(Api, ErrorStatuses) {
  const ApiIndex api(built().snapshot);
  const std::vector<std::pair<std::string, QueryParams>> not_found{
      {"/", {}},
      {"/v2/platforms", {}},
      {"/v1/nowhere/parcels", {}},
      {"/v1/sandbox/nothing", {}},
      {"/v1/sandbox/parcels/999999999", {}},
      {"/v1/sandbox/parcels/abc", {}},
      {"/v1/sandbox/views/unknown_view", {}},
      {"/v1/sandbox/views/traffic", {}},
      {"/v1/sandbox/model", {}},
  };
  for (const auto& [path, q] : not_found) {
    const auto res = api.handle(path, q);
    EXPECT_EQ(res.status, 404) << path;
    const auto j = nlohmann::json::parse(res.body);
    EXPECT_EQ(j["error"]["status"], 404);
    EXPECT_TRUE(j["error"]["message"].is_string());
  }
  const std::vector<QueryParams> bad_trades{{{"from", "2022-13-01"}}, {{"to", "yesterday"}}, {{"from", "2022-02-01"}, {"to", "2022-01-01"}}};
  for (const auto& q : bad_trades) EXPECT_EQ(api.handle("/v1/sandbox/trades", q).status, 400);
  for (const char* b : {"1,2,3", "1,2,3,4,5", "a,b,c,d", "3,0,1,4", ""})
    EXPECT_EQ(api.handle("/v1/sandbox/parcels", {{"bbox", b}}).status, 400) << b;
  EXPECT_EQ(api.handle("/v1/sandbox/aggregates", {{"granularity", "hour"}}).status, 400);
  EXPECT_EQ(api.handle("/v1/sandbox/aggregates", {{"group_by", "color"}}).status, 400);
}

TEST(Server, ServesOverHttp) {
  ServerOptions opt;
  opt.port = 0;
  opt.cors_origin = "http://localhost:5173";
  ApiServer server(built().snapshot, opt);
  const int port = server.start();
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);

  auto res = client.Get("/v1/platforms");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
  EXPECT_TRUE(api_contract::check(api_contract::Endpoint::platforms, "/v1/platforms", res->body).empty());

  res = client.Get("/v1/voxels/trades?from=2022-01-01&to=2022-01-07");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(nlohmann::json::parse(res->body)["from"], "2022-01-01");

  res = client.Get("/v1/voxels/parcels?bbox=1,2");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = client.Options("/v1/platforms");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  EXPECT_NE(res->get_header_value("Access-Control-Allow-Methods").find("GET"), std::string::npos);

  res = client.Post("/v1/platforms", "{}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 405);
  EXPECT_EQ(res->get_header_value("Allow"), "GET, OPTIONS");
  res = client.Delete("/v1/platforms");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 405);
  server.stop();
}

TEST(Server, PublishSwapsSnapshot) {
  ServerOptions opt;
  opt.port = 0;
  opt.cors_origin = "";
  ApiServer server(built().snapshot, opt);
  const int port = server.start();
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/v1/platforms");
  ASSERT_TRUE(res);
  EXPECT_FALSE(res->has_header("Access-Control-Allow-Origin"));
  EXPECT_EQ(nlohmann::json::parse(res->body)["platforms"].size(), 5u);

  auto one = load_manifests(built().index);
  one.resize(1);
  server.publish(std::make_shared<const Snapshot>(build_snapshot(one, quick_pipeline(), 7)));
  res = client.Get("/v1/platforms");
  ASSERT_TRUE(res);
  EXPECT_EQ(nlohmann::json::parse(res->body)["platforms"].size(), 1u);
  server.stop();
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"build", "--snapshot", "/tmp/x"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  TempDir dir("cli-usage");
  EXPECT_EQ(cli({"synth", "--out", (dir / "f").string(), "--platform", "atlantis"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, RuntimeErrorsExitOne) {
  TempDir dir("cli-runtime");
  const auto r = cli({"digest", "--snapshot", (dir / "missing").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, EndToEnd) {
  TempDir dir("cli");
  const std::vector<std::string> synth{"synth", "--seed", "5", "--grid", "8", "--days", "45", "--trades", "400"};
  auto s1 = synth, s2 = synth;
  s1.insert(s1.end(), {"--out", (dir / "a").string()});
  s2.insert(s2.end(), {"--out", (dir / "b").string()});
  const auto r1 = cli(s1), r2 = cli(s2);
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(r2.code, 0) << r2.err;
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    EXPECT_EQ(read_file(e.path()), read_file(dir / "b" / fs::relative(e.path(), dir / "a"))) << e.path();
  }
  EXPECT_GT(files, 30u);

  const std::string snap = (dir / "snap").string();
  const auto build = cli({"build", "--manifest", trim(r1.out), "--snapshot", snap, "--trials", "2", "--seed", "3", "--quiet"});
  ASSERT_EQ(build.code, 0) << build.err;
  const auto digest = cli({"digest", "--snapshot", snap});
  ASSERT_EQ(digest.code, 0);
  EXPECT_EQ(trim(digest.out), trim(build.out));
  EXPECT_EQ(trim(build.out).size(), 64u);

  const Snapshot loaded = load_snapshot(snap);
  const auto& a = loaded.platforms.at(PlatformId::somnium);

  const auto exported = cli({"export", "aggregates", "--snapshot", snap, "--platform", "somnium", "--granularity", "week", "--group-by", "none"});
  ASSERT_EQ(exported.code, 0) << exported.err;
  std::istringstream lines(exported.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "platform,granularity,group_by,period,period_start,group,avg_price_usd,volume_usd,tx_count");
  Decimal volume;
  std::size_t count = 0, rows = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream cs(line);
    for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 9u) << line;
    EXPECT_EQ(cells[1], "week");
    volume += Decimal::parse(cells[7]);
    count += std::stoul(cells[8]);
    ++rows;
  }
  Decimal expect_volume;
  for (const auto& t : a.kept) expect_volume += t.amount_usd;
  EXPECT_EQ(volume, expect_volume);
  EXPECT_EQ(count, a.kept.size());
  EXPECT_EQ(rows, a.aggregates.at({Granularity::week, GroupBy::none}).size());

  const TokenId token = a.dataset.parcels.front().token_id;
  const auto pred = cli({"predict", "--snapshot", snap, "--platform", "somnium", "--token", std::to_string(token)});
  ASSERT_EQ(pred.code, 0) << pred.err;
  const auto pj = nlohmann::json::parse(pred.out);
  EXPECT_EQ(pj["token_id"], token);
  double fair = 0;
  for (const auto& e : parse_view(a.views.at(ViewId::fair_value)).entries)
    if (e.token_id == token) fair = e.metric.value_or(-1);
  EXPECT_DOUBLE_EQ(pj["fair_value"].get<double>(), fair);
  EXPECT_EQ(cli({"predict", "--snapshot", snap, "--platform", "somnium"}).code, 2);

  const auto view = cli({"view", "--snapshot", snap, "--platform", "somnium", "--view", "fair_value"});
  ASSERT_EQ(view.code, 0);
  EXPECT_EQ(view.out, a.views.at(ViewId::fair_value));
  EXPECT_EQ(cli({"view", "--snapshot", snap, "--platform", "somnium", "--view", "nope"}).code, 2);
  EXPECT_EQ(cli({"export", "aggregates", "--snapshot", snap, "--platform", "atlantis"}).code, 2);

  for (const char* table : {"trades", "filter", "correlations", "importance", "search", "parcels"}) {
    const auto r = cli({"export", table, "--snapshot", snap, "--platform", "somnium"});
    EXPECT_EQ(r.code, 0) << table << r.err;
    EXPECT_NE(r.out.find('\n'), std::string::npos) << table;
  }
}

TEST(Cli, BinaryRuns) {
  const int code = std::system((std::string(METALAND_CLI) + " --help > /dev/null").c_str());
  EXPECT_EQ(code, 0);
}
