#pragma once

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "metaland/analytics/aggregate.hpp"
#include "metaland/analytics/correlation.hpp"
#include "metaland/analytics/filter.hpp"
#include "metaland/core/validate.hpp"
#include "metaland/ingest/manifest.hpp"
#include "metaland/service/snapshot.hpp"
#include "metaland/valuation/evaluate.hpp"
#include "metaland/valuation/features.hpp"
#include "metaland/valuation/search.hpp"
#include "metaland/viewgen/view.hpp"

namespace metaland {

/// A build failure, tagged with the stage and platform it happened in.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, std::string platform, const std::string& message)
      : Error("[" + stage + (platform.empty() ? "" : " " + platform) + "] " + message),
        stage_(std::move(stage)),
        platform_(std::move(platform)) {}

  const std::string& stage() const { return stage_; }
  const std::string& platform() const { return platform_; }

 private:
  std::string stage_;
  std::string platform_;
};

using ProgressFn = std::function<void(std::string_view)>;

/// Per-platform seeds: split, search, final training.
struct PlatformSeeds {
  std::uint64_t split;
  std::uint64_t search;
  std::uint64_t train;
};

inline PlatformSeeds platform_seeds(std::uint64_t seed, PlatformId p) {
  const auto base = 16 + 4 * static_cast<std::uint64_t>(p);
  return {detail::derive_seed(seed, base), detail::derive_seed(seed, base + 1), detail::derive_seed(seed, base + 2)};
}

namespace detail {

template <typename Fn>
auto run_stage(std::string_view stage, PlatformId p, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(std::string(stage), std::string(to_string(p)), e.what());
  }
}

}  // namespace detail

/// Analytics, model and views for one already-loaded dataset.
inline PlatformArtifacts build_platform(Dataset ds, const PipelineConfig& config, std::uint64_t seed,
                                        const ProgressFn& progress = {}) {
  const PlatformId p = ds.platform;
  auto note = [&](std::string_view stage) {
    if (progress) progress(std::string(to_string(p)) + ": " + std::string(stage));
  };
  PlatformArtifacts a;
  a.dataset = std::move(ds);

  note("validate");
  detail::run_stage("validate", p, [&] {
    const auto report = validate_dataset(a.dataset);
    if (!report.accepted()) throw DataError(report.summary());
  });

  note("filter");
  detail::run_stage("filter", p, [&] {
    auto result = filter_trades(economic_trades(a.dataset.trades), config.percentile, p);
    a.kept = std::move(result.kept);
    a.filter = result.report;
  });

  note("aggregate");
  detail::run_stage("aggregate", p, [&] {
    for (Granularity g : kAllGranularities)
      for (GroupBy by : kAllGroupings) a.aggregates[{g, by}] = aggregate(a.kept, g, by);
  });

  note("correlate");
  detail::run_stage("correlate", p, [&] { a.correlations = correlation_matrix(a.dataset, a.kept); });

  const PlatformSeeds seeds = platform_seeds(seed, p);
  std::vector<TrainingExample> train;
  std::vector<TrainingExample> test;
  note("train");
  detail::run_stage("train", p, [&] {
    const FeatureContext ctx(a.dataset, a.kept);
    const FeatureSchema schema = default_schema(p);
    auto examples = assemble_all(a.kept, ctx, schema);
    std::tie(train, test) = split_dataset(examples, config.split_ratio, seeds.split);
    a.search = random_search(train, schema, config.space, config.search_trials, seeds.search);
    a.model = train_gbt(train, schema, a.search.best, seeds.train);
  });

  note("evaluate");
  detail::run_stage("evaluate", p, [&] { a.eval = evaluate(a.model, train, test); });

  note("viewgen");
  detail::run_stage("viewgen", p, [&] {
    const ViewInputs in{a.dataset, a.kept, &a.model};
    for (ViewId v : platform_views(p)) a.views[v] = serialize_view(generate_view(p, v, in));
  });
  return a;
}

/// ingest -> validate -> filter -> aggregate -> correlate -> search+train ->
/// evaluate -> viewgen for every manifest. Throws PipelineError on the first
/// failure; no partial snapshot is returned.
inline Snapshot build_snapshot(const std::vector<FixtureManifest>& manifests, const PipelineConfig& config,
                               std::uint64_t seed, const ProgressFn& progress = {}) {
  if (manifests.empty()) throw PipelineError("ingest", "", "no manifests given");
  detail::run_stage("config", manifests.front().platform, [&] {
    config.space.validate();
    if (config.search_trials == 0) throw InvalidArgument("search_trials must be >= 1");
  });
  Snapshot s;
  s.seed = seed;
  s.config = config;
  std::set<PlatformId> seen;
  for (const auto& m : manifests)
    if (!seen.insert(m.platform).second) throw PipelineError("ingest", std::string(to_string(m.platform)), "duplicate platform manifest");

  std::vector<Dataset> datasets;
  for (const auto& m : manifests) {
    if (progress) progress(std::string(to_string(m.platform)) + ": ingest");
    datasets.push_back(detail::run_stage("ingest", m.platform, [&] { return load_dataset(m); }));
  }
  for (auto& ds : datasets) {
    const PlatformId p = ds.platform;
    s.platforms.emplace(p, build_platform(std::move(ds), config, seed, progress));
  }
  encode_snapshot(s);
  return s;
}

}  // namespace metaland
