#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "metaland/core/types.hpp"
#include "metaland/ingest/manifest.hpp"
#include "metaland/ingest/parse.hpp"

namespace metaland {

struct SyntheticConfig {
  int grid_size = 24;      // parcels per side
  int n_pois = 4;
  int n_days = 300;
  int n_trades = 5000;     // economic trades per platform
  double noise = 0.1;      // sigma of the lognormal price noise
  double loc_amplitude = 4.0;  // loc_factor = 1 + amplitude * exp(-distance / decay)
  double loc_decay = 3.0;
  std::vector<PlatformId> platforms{kAllPlatforms.begin(), kAllPlatforms.end()};
  Day end_date = parse_day("2022-11-30");
};

/// Factors of the price law used to generate one platform:
/// price(parcel, day) = market(day) * loc_factor(parcel) * size_factor(parcel) * noise.
struct GroundTruth {
  PlatformId platform = PlatformId::sandbox;
  std::vector<std::pair<int, int>> pois;
  std::vector<SeriesPoint> market;
  std::map<TokenId, double> loc_factor;
  std::map<TokenId, double> size_factor;
};

struct SyntheticWorld {
  std::vector<Dataset> datasets;
  std::vector<GroundTruth> truth;
};

namespace synth_detail {

inline constexpr std::array<double, 7> kWeeklyPattern{-0.6, -0.3, 0.0, 0.1, 0.3, 1.0, -0.5};

inline double base_price_usd(PlatformId p) {
  switch (p) {
    case PlatformId::sandbox: return 3000.0;
    case PlatformId::decentraland: return 4000.0;
    case PlatformId::voxels: return 2500.0;
    case PlatformId::somnium: return 2200.0;
    case PlatformId::otherside: return 6000.0;
  }
  return 1000.0;
}

inline double token_start_usd(std::string_view currency) {
  if (currency == "MANA") return 1.0;
  if (currency == "SAND") return 1.5;
  if (currency == "CUBE") return 0.8;
  if (currency == "APE") return 10.0;
  return 1.0;
}

inline double loc_factor(double distance, double amplitude, double decay) {
  return 1.0 + amplitude * std::exp(-distance / decay);
}

inline std::string account(std::uint64_t n) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "0x";
  std::mt19937_64 mix(n * 0x9E3779B97F4A7C15ULL + 1);
  for (int i = 0; i < 40; ++i) out += kHex[mix() & 0xF];
  return out;
}

class Generator {
 public:
  Generator(std::uint64_t seed, const SyntheticConfig& cfg, PlatformId platform)
      : cfg_(cfg), platform_(platform), prof_(profile(platform)) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(platform) + 1};
    rng_.seed(seq);
    start_ = cfg.end_date - std::chrono::days{cfg.n_days - 1};
  }

  std::pair<Dataset, GroundTruth> run() {
    ds_.platform = platform_;
    truth_.platform = platform_;
    make_parcels();
    make_market();
    make_quotes();
    make_signals();
    make_trades();
    make_listings();
    make_traffic();
    return {std::move(ds_), std::move(truth_)};
  }

 private:
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

  void make_parcels() {
    const int g = cfg_.grid_size;
    const int lo = -g / 2;
    std::set<std::pair<int, int>> poi_cells;
    while (static_cast<int>(poi_cells.size()) < std::min(cfg_.n_pois, g * g))
      poi_cells.insert({uniform_int(lo, lo + g - 1), uniform_int(lo, lo + g - 1)});
    truth_.pois.assign(poi_cells.begin(), poi_cells.end());

    std::map<std::pair<int, int>, std::string> estate_of = place_estates(lo, g);

    for (int row = 0; row < g; ++row) {
      for (int col = 0; col < g; ++col) {
        Parcel p;
        p.platform = platform_;
        p.token_id = static_cast<TokenId>(row * g + col + 1);
        p.x = lo + col;
        p.y = lo + row;
        double d = std::numeric_limits<double>::infinity();
        for (const auto& [px, py] : truth_.pois) d = std::min(d, std::hypot(p.x - px, p.y - py));
        double size = 1.0;
        switch (prof_.geometry) {
          case GeometryKind::fixed_square:
            p.geometry = FixedSquare{*prof_.fixed_side_m};
            break;
          case GeometryKind::voxels_box: {
            const double area = uniform_int(40, 400);
            const double height = uniform_int(8, 40);
            p.geometry = VoxelsBox{area, height};
            size = std::pow(area * height / (220.0 * 24.0), 0.25);
            static constexpr std::array<const char*, 4> kIslands{"Origin City", "Proxima", "Frankfurt", "Berlin"};
            p.extra_attributes["Island"] = kIslands[static_cast<std::size_t>(uniform_int(0, 3))];
            break;
          }
          case GeometryKind::somnium_class: {
            const double r = uniform(0.0, 1.0);
            const SomniumClass cls = r < 0.6 ? SomniumClass::S : (r < 0.9 ? SomniumClass::M : SomniumClass::XL);
            p.geometry = SomniumPlot{cls, somnium_volume_m3(cls)};
            size = cls == SomniumClass::S ? 1.0 : (cls == SomniumClass::M ? 1.5 : 2.5);
            break;
          }
          case GeometryKind::otherside_traits: {
            const auto sediment = static_cast<std::size_t>(uniform_int(0, static_cast<int>(prof_.sediment_labels.size()) - 1));
            const double r = uniform(0.0, 1.0);
            const std::size_t artifact = r < 0.6 ? 0 : (r < 0.85 ? 1 : (r < 0.97 ? 2 : 3));
            const bool koda = chance(0.1);
            p.geometry = OthersideTraits{std::string(prof_.sediment_labels[sediment]),
                                         std::string(prof_.artifact_labels[artifact]), koda};
            size = (1.0 + 0.1 * static_cast<double>(sediment)) * (1.0 + 0.2 * static_cast<double>(artifact)) * (koda ? 1.5 : 1.0);
            break;
          }
        }
        // Somnium and Otherside metadata carry no POI distance.
        if (!prof_.attributes.poi_distance.empty()) p.distance_to_nearest_poi = d;
        if (auto it = estate_of.find({p.x, p.y}); it != estate_of.end()) p.estate_id = it->second;
        truth_.loc_factor[p.token_id] = loc_factor(d, cfg_.loc_amplitude, cfg_.loc_decay);
        truth_.size_factor[p.token_id] = size;
        ds_.parcels.push_back(std::move(p));
      }
    }
    ds_.estates = derive_estates(platform_, ds_.parcels);
  }

  std::map<std::pair<int, int>, std::string> place_estates(int lo, int g) {
    std::map<std::pair<int, int>, std::string> owner;
    if (prof_.geometry != GeometryKind::fixed_square) return owner;
    const int attempts = std::max(2, g / 3);
    int next_id = 1;
    for (int a = 0; a < attempts; ++a) {
      int w = 0, h = 0;
      if (prof_.estates_square) {
        const int side = prof_.estate_sides[static_cast<std::size_t>(uniform_int(0, 1))];
        w = h = side;
      } else {
        w = uniform_int(1, 3);
        h = uniform_int(2, 3);
      }
      if (w > g || h > g) continue;
      const int x0 = uniform_int(lo, lo + g - w);
      const int y0 = uniform_int(lo, lo + g - h);
      bool free = true;
      for (int dx = -1; dx <= w && free; ++dx)
        for (int dy = -1; dy <= h && free; ++dy) free = !owner.count({x0 + dx, y0 + dy});
      if (!free) continue;
      const std::string id = "E" + std::to_string(next_id++);
      for (int dx = 0; dx < w; ++dx)
        for (int dy = 0; dy < h; ++dy) owner[{x0 + dx, y0 + dy}] = id;
    }
    return owner;
  }

  void make_market() {
    const double base = base_price_usd(platform_);
    for (int i = 0; i < cfg_.n_days; ++i) {
      const Day day = start_ + std::chrono::days{i};
      const double t = static_cast<double>(i) / std::max(1, cfg_.n_days - 1);
      const double trend = 1.0 + 0.6 * t - 0.4 * t * t;
      const double seasonal = 1.0 + 0.05 * kWeeklyPattern[static_cast<std::size_t>(iso_weekday_index(day))];
      truth_.market.push_back({day, base * trend * seasonal});
    }
  }

  double market(Day day) const { return truth_.market[static_cast<std::size_t>((day - start_).count())].value; }

  void make_quotes() {
    std::vector<std::pair<std::string, double>> walks{{"ETH", 3000.0}};
    if (prof_.token_currency) walks.emplace_back(std::string(*prof_.token_currency), token_start_usd(*prof_.token_currency));
    for (int i = 0; i < cfg_.n_days; ++i) {
      const Day day = start_ + std::chrono::days{i};
      std::vector<FxQuote> today;
      for (auto& [cur, level] : walks) {
        if (i > 0) level *= std::exp(0.03 * normal());
        today.push_back({day, cur, Decimal::from_double(level)});
        if (cur == "ETH") today.push_back({day, "WETH", Decimal::from_double(level)});
      }
      today.push_back({day, "USDC", Decimal::from_int(1)});
      std::sort(today.begin(), today.end(), [](const FxQuote& a, const FxQuote& b) { return a.currency < b.currency; });
      for (auto& q : today) ds_.quotes.push_back(std::move(q));
    }
    book_ = QuoteBook(ds_.quotes);
  }

  void make_signals() {
    const double base = base_price_usd(platform_);
    for (int i = 0; i < cfg_.n_days; ++i) {
      const Day day = start_ + std::chrono::days{i};
      const double tweets = std::round(800.0 * std::exp(0.3 * normal()));
      const double hashtag = std::round(5000.0 * std::exp(0.3 * normal()));
      const double trend = std::clamp(50.0 + 60.0 * (market(day) / base - 1.2) + 5.0 * normal(), 0.0, 100.0);
      ds_.signals.push_back({day, SignalSource::twitter_platform, platform_, tweets});
      ds_.signals.push_back({day, SignalSource::twitter_metaverse_hashtag, std::nullopt, hashtag});
      ds_.signals.push_back({day, SignalSource::google_trend_metaverse, std::nullopt, std::round(trend)});
    }
  }

  double fair_price(const Parcel& p, Day day) const {
    return market(day) * truth_.loc_factor.at(p.token_id) * truth_.size_factor.at(p.token_id);
  }

  void make_trades() {
    const int accounts = 4 * cfg_.grid_size * cfg_.grid_size + 50;
    auto pick_pair = [&]() {
      const int buyer = uniform_int(0, accounts - 1);
      int seller = uniform_int(0, accounts - 2);
      if (seller >= buyer) ++seller;
      return std::pair{account(static_cast<std::uint64_t>(platform_) * 1'000'000 + static_cast<std::uint64_t>(buyer)),
                       account(static_cast<std::uint64_t>(platform_) * 1'000'000 + static_cast<std::uint64_t>(seller))};
    };
    const std::string token = prof_.token_currency ? std::string(*prof_.token_currency) : "USDC";
    const int transfers = cfg_.n_trades * 3 / 100;
    for (int i = 0; i < cfg_.n_trades + transfers; ++i) {
      const bool economic = i < cfg_.n_trades;
      const Day day = start_ + std::chrono::days{uniform_int(0, cfg_.n_days - 1)};
      const Parcel& parcel = ds_.parcels[static_cast<std::size_t>(uniform_int(0, static_cast<int>(ds_.parcels.size()) - 1))];
      Trade t;
      t.platform = platform_;
      t.token_id = parcel.token_id;
      t.timestamp = std::chrono::time_point_cast<std::chrono::seconds>(day) + std::chrono::seconds{uniform_int(0, 86399)};
      t.chain = platform_ == PlatformId::sandbox && chance(0.03) ? Chain::polygon : Chain::ethereum;
      std::tie(t.buyer, t.seller) = pick_pair();
      if (economic) {
        const double r = uniform(0.0, 1.0);
        t.currency = r < 0.8 ? "ETH" : (r < 0.9 ? "WETH" : token);
        const double e = uniform(0.0, 1.0);
        t.exchange = e < 0.88 ? "opensea" : (e < 0.94 ? "x2y2" : std::string(prof_.native_exchange));
        const double price = fair_price(parcel, day) * std::exp(cfg_.noise * normal());
        const Decimal rate = *book_.rate(day, t.currency);
        t.amount_crypto = Decimal::from_double(price / rate.to_double());
        t.amount_usd = t.amount_crypto * rate;
      } else {
        t.currency = "ETH";
        t.exchange = "transfer";
      }
      t.economic = t.amount_usd.is_positive();
      ds_.trades.push_back(std::move(t));
    }
    std::stable_sort(ds_.trades.begin(), ds_.trades.end(),
                     [](const Trade& a, const Trade& b) { return a.timestamp < b.timestamp; });
  }

  void make_listings() {
    std::vector<Listing> raw;
    for (int back = 2; back >= 0; --back) {
      const Day day = cfg_.end_date - std::chrono::days{back};
      if (day < start_) continue;
      const Decimal eth = *book_.rate(day, "ETH");
      for (const auto& p : ds_.parcels) {
        for (const auto& [exchange, prob] : {std::pair<std::string_view, double>{"opensea", 0.1},
                                             std::pair<std::string_view, double>{prof_.native_exchange, 0.04}}) {
          if (!chance(prob)) continue;
          const double usd = fair_price(p, day) * uniform(0.8, 1.6);
          Listing l{platform_, p.token_id, std::string(exchange), "ETH", Decimal::from_double(usd / eth.to_double()), {}, day};
          l.price_usd = l.price_amount * eth;
          raw.push_back(std::move(l));
        }
      }
    }
    ds_.listings = detail::collapse_listings(std::move(raw));
  }

  void make_traffic() {
    if (prof_.traffic_rules.empty()) return;
    const bool daily = prof_.traffic_rules.front().metric == TrafficMetric::daily_cumulative_unique;
    const int window = std::min(cfg_.n_days, daily ? 60 : 45);
    const std::vector<int> hours = daily ? std::vector<int>{0} : (platform_ == PlatformId::somnium ? std::vector<int>{20}
                                                                                                   : std::vector<int>{12, 20});
    for (const auto& p : ds_.parcels) {
      if (!chance(0.3)) continue;
      const double lambda = (daily ? 5.0 : 2.0) * truth_.loc_factor.at(p.token_id);
      std::poisson_distribution<int> visits(lambda);
      for (int i = window - 1; i >= 0; --i) {
        const Day day = cfg_.end_date - std::chrono::days{i};
        for (int h : hours) {
          for (const auto& rule : prof_.traffic_rules) {
            TrafficSample s;
            s.platform = platform_;
            s.token_id = p.token_id;
            s.period_start = std::chrono::time_point_cast<std::chrono::seconds>(day) + std::chrono::hours{h};
            s.metric = rule.metric;
            s.audience = rule.audience;
            s.count = static_cast<std::uint64_t>(visits(rng_));
            ds_.traffic.push_back(s);
          }
        }
      }
    }
  }

  const SyntheticConfig& cfg_;
  PlatformId platform_;
  const PlatformProfile& prof_;
  std::mt19937_64 rng_;
  Day start_{};
  Dataset ds_;
  GroundTruth truth_;
  QuoteBook book_;
};

}  // namespace synth_detail

/// Deterministic synthetic metaverse: identical seed and config give
/// identical datasets.
inline SyntheticWorld generate_synthetic(std::uint64_t seed, const SyntheticConfig& cfg) {
  if (cfg.grid_size <= 0 || cfg.n_pois <= 0 || cfg.n_days <= 0 || cfg.n_trades <= 0 || cfg.noise < 0.0 ||
      cfg.loc_amplitude < 0.0 || cfg.loc_decay <= 0.0 || cfg.platforms.empty())
    throw InvalidArgument("synthetic config: all sizes must be positive and noise non-negative");
  SyntheticWorld world;
  for (PlatformId p : cfg.platforms) {
    auto [ds, truth] = synth_detail::Generator(seed, cfg, p).run();
    world.datasets.push_back(std::move(ds));
    world.truth.push_back(std::move(truth));
  }
  return world;
}

inline json truth_to_json(const GroundTruth& t) {
  json pois = json::array();
  for (const auto& [x, y] : t.pois) pois.push_back({x, y});
  json market = json::array();
  for (const auto& p : t.market) market.push_back({{"date", format_day(p.date)}, {"value", p.value}});
  json parcels = json::array();
  for (const auto& [token, loc] : t.loc_factor)
    parcels.push_back({{"token_id", token}, {"loc_factor", loc}, {"size_factor", t.size_factor.at(token)}});
  return {{"platform", to_string(t.platform)}, {"pois", pois}, {"market", market}, {"parcels", parcels}};
}

/// Writes one fixture directory per platform plus an index `manifest.json`.
/// Returns the index manifest path.
inline fs::path write_synthetic(const SyntheticWorld& world, const fs::path& out_dir) {
  json index{{"schema_version", kFixtureSchemaVersion}, {"platforms", json::array()}};
  for (std::size_t i = 0; i < world.datasets.size(); ++i) {
    const std::string name(to_string(world.datasets[i].platform));
    write_fixture(world.datasets[i], out_dir / name);
    write_file(out_dir / name / "truth.json", truth_to_json(world.truth[i]).dump() + "\n");
    index["platforms"].push_back(name + "/manifest.json");
  }
  const fs::path path = out_dir / "manifest.json";
  write_file(path, index.dump(2) + "\n");
  return path;
}

}  // namespace metaland
