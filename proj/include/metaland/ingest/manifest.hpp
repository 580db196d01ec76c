#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metaland/core/types.hpp"
#include "metaland/ingest/files.hpp"
#include "metaland/ingest/parse.hpp"

namespace metaland {

inline constexpr int kFixtureSchemaVersion = 1;

/// Per-platform fixture manifest. Paths are resolved relative to the
/// manifest's directory.
struct FixtureManifest {
  PlatformId platform = PlatformId::sandbox;
  int schema_version = kFixtureSchemaVersion;
  fs::path parcels;
  fs::path trades;
  fs::path listings;
  fs::path traffic;
  fs::path signals;
  fs::path quotes;
};

inline constexpr std::array<std::string_view, 6> kManifestFileKeys{"parcels", "trades", "listings",
                                                                   "traffic", "signals", "quotes"};

inline FixtureManifest manifest_from_json(const json& j, const fs::path& base_dir) {
  using namespace json_fields;
  constexpr std::string_view ctx = "manifest";
  FixtureManifest m;
  m.schema_version = static_cast<int>(get_int(j, "schema_version", ctx));
  if (m.schema_version != kFixtureSchemaVersion)
    throw ParseError("manifest: unsupported schema_version " + std::to_string(m.schema_version));
  m.platform = parse_platform(get_string(j, "platform", ctx));
  m.parcels = base_dir / get_string(j, "parcels", ctx);
  m.trades = base_dir / get_string(j, "trades", ctx);
  m.listings = base_dir / get_string(j, "listings", ctx);
  m.traffic = base_dir / get_string(j, "traffic", ctx);
  m.signals = base_dir / get_string(j, "signals", ctx);
  m.quotes = base_dir / get_string(j, "quotes", ctx);
  for (const auto* p : {&m.parcels, &m.trades, &m.listings, &m.traffic, &m.signals, &m.quotes})
    if (!fs::is_regular_file(*p)) throw DataError("manifest: referenced file " + p->string() + " does not exist");
  return m;
}

/// Loads either a platform manifest or an index manifest
/// (`{"schema_version": 1, "platforms": ["sandbox/manifest.json", ...]}`).
inline std::vector<FixtureManifest> load_manifests(const fs::path& path) {
  const json j = json_fields::parse_document(read_file(path), path.string());
  const fs::path base = path.parent_path();
  if (j.is_object() && j.contains("platforms")) {
    const auto version = json_fields::get_int(j, "schema_version", "manifest index");
    if (version != kFixtureSchemaVersion)
      throw ParseError("manifest index: unsupported schema_version " + std::to_string(version));
    if (!j["platforms"].is_array()) throw ParseError("manifest index: platforms must be an array");
    std::vector<FixtureManifest> out;
    for (const auto& rel : j["platforms"]) {
      if (!rel.is_string()) throw ParseError("manifest index: entries must be paths");
      for (auto& m : load_manifests(base / rel.get<std::string>())) out.push_back(std::move(m));
    }
    return out;
  }
  return {manifest_from_json(j, base)};
}

inline json manifest_to_json(const FixtureManifest& m, const fs::path& base_dir) {
  auto rel = [&](const fs::path& p) { return p.lexically_relative(base_dir).generic_string(); };
  return {{"schema_version", m.schema_version}, {"platform", to_string(m.platform)}, {"parcels", rel(m.parcels)},
          {"trades", rel(m.trades)},            {"listings", rel(m.listings)},        {"traffic", rel(m.traffic)},
          {"signals", rel(m.signals)},          {"quotes", rel(m.quotes)}};
}

/// Fixture file name and contents, in manifest key order.
using FixtureFiles = std::vector<std::pair<std::string, std::string>>;

inline FixtureFiles fixture_files(const Dataset& ds) {
  return {{"parcels.ndjson", parcels_to_documents(ds.parcels)},  {"trades.ndjson", to_ndjson(ds.trades)},
          {"listings.ndjson", listings_to_responses(ds.listings)}, {"traffic.ndjson", to_ndjson(ds.traffic)},
          {"signals.ndjson", to_ndjson(ds.signals)},               {"quotes.ndjson", to_ndjson(ds.quotes)}};
}

/// Parses the six fixture texts (parcels, trades, listings, traffic, signals,
/// quotes); `names` label errors.
inline Dataset parse_dataset(PlatformId platform, const std::array<std::string_view, 6>& texts,
                             const std::array<std::string, 6>& names) {
  Dataset ds;
  ds.platform = platform;
  auto tagged = [&](std::size_t i, auto&& parse) {
    try {
      return parse(texts[i]);
    } catch (const ParseError& e) {
      throw ParseError(names[i] + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(names[i] + ": " + e.what());
    }
  };
  ds.quotes = tagged(5, [](std::string_view t) { return parse_quotes(t); });
  const QuoteBook book(ds.quotes);
  ds.parcels = tagged(0, [&](std::string_view t) { return parse_parcel_documents(platform, t); });
  ds.estates = derive_estates(platform, ds.parcels);
  ds.trades = tagged(1, [&](std::string_view t) { return parse_trades(platform, t, book); });
  ds.listings = tagged(2, [](std::string_view t) { return parse_listing_responses(t); });
  ds.traffic = tagged(3, [&](std::string_view t) { return parse_traffic(platform, t); });
  ds.signals = tagged(4, [](std::string_view t) { return parse_signals(t); });
  return ds;
}

/// Reads and parses every file a manifest references.
inline Dataset load_dataset(const FixtureManifest& m) {
  const std::array<fs::path, 6> paths{m.parcels, m.trades, m.listings, m.traffic, m.signals, m.quotes};
  std::array<std::string, 6> texts;
  std::array<std::string, 6> names;
  for (std::size_t i = 0; i < 6; ++i) {
    texts[i] = read_file(paths[i]);
    names[i] = paths[i].string();
  }
  return parse_dataset(m.platform, {texts[0], texts[1], texts[2], texts[3], texts[4], texts[5]}, names);
}

/// Writes a dataset as fixture files plus `manifest.json` under `dir`.
inline FixtureManifest write_fixture(const Dataset& ds, const fs::path& dir) {
  FixtureManifest m;
  m.platform = ds.platform;
  const auto files = fixture_files(ds);
  for (const auto& [name, text] : files) write_file(dir / name, text);
  m.parcels = dir / files[0].first;
  m.trades = dir / files[1].first;
  m.listings = dir / files[2].first;
  m.traffic = dir / files[3].first;
  m.signals = dir / files[4].first;
  m.quotes = dir / files[5].first;
  write_file(dir / "manifest.json", manifest_to_json(m, dir).dump(2) + "\n");
  return m;
}

}  // namespace metaland
