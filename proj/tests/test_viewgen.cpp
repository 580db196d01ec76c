#include <gtest/gtest.h>

#include "support.hpp"

using namespace metaland;
using namespace testing_support;

namespace {

Dataset grid_dataset(int n) {
  Dataset ds;
  ds.platform = PlatformId::decentraland;
  for (int i = 0; i < n; ++i)
    ds.parcels.push_back({PlatformId::decentraland, static_cast<TokenId>(n - i), i, -i, FixedSquare{16.0}, std::nullopt, 1.0 + i, {}});
  ds.quotes = {{day("2022-06-01"), "ETH", dec("1000")}};
  return ds;
}

struct Trained {
  Dataset ds;
  std::vector<Trade> kept;
  GbtModel model;
};

const Trained& trained(PlatformId p) {
  static std::map<PlatformId, Trained> cache;
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  SyntheticConfig cfg = small_config();
  cfg.platforms = {p};
  Trained t;
  t.ds = generate_synthetic(31, cfg).datasets[0];
  t.kept = filter_trades(economic_trades(t.ds.trades)).kept;
  const FeatureContext ctx(t.ds, t.kept);
  const auto examples = assemble_all(t.kept, ctx, default_schema(p));
  GbtParams params;
  params.n_trees = 40;
  t.model = train_gbt(examples, default_schema(p), params, 1);
  return cache.emplace(p, std::move(t)).first->second;
}

}  // namespace

TEST(View, AvailabilityPerPlatform) {
  EXPECT_EQ(platform_views(PlatformId::decentraland).size(), 7u);
  EXPECT_EQ(platform_views(PlatformId::voxels).size(), 7u);
  EXPECT_EQ(platform_views(PlatformId::somnium).size(), 7u);
  EXPECT_EQ(platform_views(PlatformId::sandbox).size(), 6u);
  EXPECT_EQ(platform_views(PlatformId::otherside).size(), 7u);
  EXPECT_FALSE(view_supported(PlatformId::decentraland, ViewId::resources));
  EXPECT_FALSE(view_supported(PlatformId::otherside, ViewId::traffic));
  for (ViewId v : kAllViews) EXPECT_EQ(parse_view_id(to_string(v)), v);
  EXPECT_THROW(parse_view_id("heat"), ParseError);
}

// Ten parcels flipped 0..9 times: each lands in its own decile.
TEST(View, FlipDecilesOnTenParcels) {
  Dataset ds = grid_dataset(10);
  for (const auto& p : ds.parcels)
    for (TokenId k = 1; k < p.token_id; ++k) ds.trades.push_back(trade(p.token_id, "2022-06-01T12:00:00Z", "10"));
  ds.trades.push_back(trade(5, "2022-06-01T13:00:00Z", "0"));  // transfers are not flips
  const auto layer = generate_view(PlatformId::decentraland, ViewId::flip, {ds, ds.trades, nullptr});
  ASSERT_EQ(layer.entries.size(), 10u);
  EXPECT_EQ(layer.legend, (std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  for (const auto& e : layer.entries) {
    EXPECT_EQ(*e.metric, static_cast<double>(e.token_id - 1));
    EXPECT_EQ(*e.color, static_cast<int>(e.token_id - 1));
  }
  EXPECT_TRUE(std::is_sorted(layer.entries.begin(), layer.entries.end(),
                             [](const ViewEntry& a, const ViewEntry& b) { return a.token_id < b.token_id; }));
}

TEST(View, DecileLegendAndColors) {
  EXPECT_TRUE(decile_legend({}).empty());
  const auto single = decile_legend({5.0});
  EXPECT_EQ(single, std::vector<double>(10, 5.0));
  EXPECT_EQ(color_of(5.0, single), 9);
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 0.0);
  const auto legend = decile_legend(v);
  EXPECT_EQ(legend.front(), 0.0);
  EXPECT_EQ(legend.back(), 90.0);
  EXPECT_EQ(color_of(-1.0, legend), 0);
  EXPECT_EQ(color_of(9.5, legend), 0);
  EXPECT_EQ(color_of(10.0, legend), 1);
  EXPECT_EQ(color_of(1e9, legend), 9);
}

TEST(View, ValueIsOneWhenLastPriceEqualsFairValue) {
  Dataset ds = grid_dataset(3);
  ds.trades = {trade(1, "2022-06-01T01:00:00Z", "250"), trade(2, "2022-06-01T02:00:00Z", "250")};
  // A model with no trees predicts its base score for every parcel.
  GbtModel model;
  model.schema = make_schema(PlatformId::decentraland, std::vector<std::string>{"x", "y"});
  model.base_score = 250.0;
  const auto layer = generate_view(PlatformId::decentraland, ViewId::value, {ds, ds.trades, &model});
  for (const auto& e : layer.entries) {
    if (e.token_id == 3) {
      EXPECT_FALSE(e.metric);
      EXPECT_FALSE(e.color);
    } else {
      EXPECT_EQ(*e.metric, 1.0);
    }
  }
}

TEST(View, LastPriceUsesLatestEconomicTrade) {
  Dataset ds = grid_dataset(2);
  ds.trades = {trade(1, "2022-06-01T01:00:00Z", "100"), trade(1, "2022-06-01T03:00:00Z", "300"),
               trade(1, "2022-06-01T04:00:00Z", "0")};
  const auto layer = generate_view(PlatformId::decentraland, ViewId::last_price, {ds, ds.trades, nullptr});
  EXPECT_EQ(*layer.entries[0].metric, 300.0);
  EXPECT_FALSE(layer.entries[1].metric);
}

TEST(View, TradingUsesCheapestListingOnLatestDate) {
  Dataset ds = grid_dataset(2);
  ds.listings = {{PlatformId::decentraland, 1, "a", "ETH", dec("1"), dec("500"), day("2022-06-01")},
                 {PlatformId::decentraland, 1, "b", "ETH", dec("1"), dec("400"), day("2022-06-01")},
                 {PlatformId::decentraland, 2, "a", "ETH", dec("1"), dec("100"), day("2022-05-31")}};
  const auto layer = generate_view(PlatformId::decentraland, ViewId::trading, {ds, ds.trades, nullptr});
  EXPECT_EQ(*layer.entries[0].metric, 400.0);
  EXPECT_FALSE(layer.entries[1].metric);
}

TEST(View, FairValueEqualsDirectPrediction) {
  for (PlatformId p : {PlatformId::decentraland, PlatformId::voxels}) {
    const Trained& t = trained(p);
    const auto layer = generate_view(p, ViewId::fair_value, {t.ds, t.kept, &t.model});
    const FeatureContext ctx(t.ds, t.kept);
    EXPECT_EQ(layer.generated_at, ctx.last_day());
    for (const auto& e : layer.entries)
      EXPECT_EQ(*e.metric, predict(t.model, ctx.features_at(ctx.parcel(e.token_id), ctx.last_day(), t.model.schema)));
  }
}

TEST(ViewProperty, LayersAreCompleteMonotoneAndReproducible) {
  for (PlatformId p : kAllPlatforms) {
    const Trained& t = trained(p);
    for (ViewId v : platform_views(p)) {
      const ViewInputs in{t.ds, t.kept, &t.model};
      const auto layer = generate_view(p, v, in);
      EXPECT_EQ(layer.entries.size(), t.ds.parcels.size());
      std::vector<std::pair<double, int>> colored;
      for (const auto& e : layer.entries) {
        ASSERT_EQ(e.metric.has_value(), e.color.has_value());
        if (e.metric) {
          EXPECT_GE(*e.color, 0);
          EXPECT_LT(*e.color, 10);
          colored.emplace_back(*e.metric, *e.color);
        }
      }
      std::sort(colored.begin(), colored.end());
      for (std::size_t i = 1; i < colored.size(); ++i) EXPECT_LE(colored[i - 1].second, colored[i].second);
      EXPECT_EQ(layer.legend.empty(), colored.empty());
      EXPECT_TRUE(std::is_sorted(layer.legend.begin(), layer.legend.end()));
      const std::string bytes = serialize_view(layer);
      EXPECT_EQ(serialize_view(generate_view(p, v, in)), bytes) << to_string(p) << "/" << to_string(v);
      EXPECT_EQ(parse_view(bytes), layer);
      EXPECT_EQ(serialize_view(parse_view(bytes)), bytes);
    }
  }
}

TEST(View, ResourcesCountTraits) {
  const Trained& t = trained(PlatformId::otherside);
  const auto layer = generate_view(PlatformId::otherside, ViewId::resources, {t.ds, t.kept, nullptr});
  std::map<TokenId, const Parcel*> by_token;
  for (const auto& p : t.ds.parcels) by_token[p.token_id] = &p;
  for (const auto& e : layer.entries) {
    const auto& g = std::get<OthersideTraits>(by_token.at(e.token_id)->geometry);
    EXPECT_EQ(*e.metric, 1.0 + (g.artifact != "None" ? 1.0 : 0.0) + (g.has_koda ? 10.0 : 0.0));
  }
}

TEST(View, Errors) {
  const Trained& t = trained(PlatformId::decentraland);
  EXPECT_THROW(generate_view(PlatformId::decentraland, ViewId::resources, {t.ds, t.kept, &t.model}), InvalidArgument);
  EXPECT_THROW(generate_view(PlatformId::decentraland, ViewId::fair_value, {t.ds, t.kept, nullptr}), InvalidArgument);
  EXPECT_THROW(generate_view(PlatformId::voxels, ViewId::land, {t.ds, t.kept, nullptr}), InvalidArgument);
  const Trained& other = trained(PlatformId::sandbox);
  EXPECT_THROW(generate_view(PlatformId::decentraland, ViewId::value, {t.ds, t.kept, &other.model}), InvalidArgument);
  EXPECT_THROW(parse_view(R"({"platform":"sandbox","view_id":"land","generated_at":"2022-01-01","legend":[],
    "entries":[{"token_id":1,"x":0,"y":0,"metric":1.0,"color":null}]})"),
               ParseError);
  EXPECT_THROW(parse_view(R"({"platform":"sandbox","view_id":"heat","generated_at":"2022-01-01","legend":[],"entries":[]})"),
               ParseError);
}

TEST(View, WireFormatShape) {
  Dataset ds = grid_dataset(2);
  const auto layer = generate_view(PlatformId::decentraland, ViewId::last_price, {ds, ds.trades, nullptr});
  EXPECT_EQ(serialize_view(layer),
            R"({"entries":[{"color":null,"metric":null,"token_id":1,"x":1,"y":-1},{"color":null,"metric":null,"token_id":2,"x":0,"y":0}],)"
            R"("generated_at":"2022-06-01","legend":[],"platform":"decentraland","view_id":"last_price"})");
}
