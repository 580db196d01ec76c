#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "metaland/core/error.hpp"
#include "metaland/valuation/gbt.hpp"

namespace metaland {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded uniform partition of [0, n) into ceil(ratio * n) / remainder.
/// Indices are returned sorted within each part.
inline SplitIndices split_indices(std::size_t n, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidArgument("split ratio must be in (0, 1]");
  const auto n_train = std::min(n, static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with a modulo draw; the bias is negligible at these sizes and
  // keeps partitions identical across standard library implementations.
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_dataset(std::span<const T> items, double ratio, std::uint64_t seed) {
  const SplitIndices idx = split_indices(items.size(), ratio, seed);
  std::pair<std::vector<T>, std::vector<T>> out;
  out.first.reserve(idx.train.size());
  out.second.reserve(idx.test.size());
  for (std::size_t i : idx.train) out.first.push_back(items[i]);
  for (std::size_t i : idx.test) out.second.push_back(items[i]);
  return out;
}

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_dataset(const std::vector<T>& items, double ratio, std::uint64_t seed) {
  return split_dataset(std::span<const T>(items), ratio, seed);
}

/// Hyperparameter ranges. Integer ranges are inclusive.
struct SearchSpace {
  std::pair<int, int> n_trees{50, 500};
  std::pair<int, int> max_depth{2, 8};
  std::vector<double> learning_rate{0.03, 0.1, 0.3};
  std::pair<int, int> min_leaf{1, 20};
  std::vector<double> subsample{0.7, 1.0};
  std::vector<double> colsample{0.7, 1.0};
  std::vector<double> lambda{0.0, 1.0, 10.0};
  TargetTransform target_transform = TargetTransform::identity;

  bool operator==(const SearchSpace&) const = default;

  /// A space containing only `p`.
  static SearchSpace single(const GbtParams& p) {
    return {{p.n_trees, p.n_trees}, {p.max_depth, p.max_depth}, {p.learning_rate}, {p.min_leaf, p.min_leaf},
            {p.subsample},          {p.colsample},              {p.lambda},        p.target_transform};
  }

  void validate() const {
    auto range_ok = [](std::pair<int, int> r) { return r.first <= r.second; };
    if (!range_ok(n_trees) || !range_ok(max_depth) || !range_ok(min_leaf))
      throw InvalidArgument("search space: empty integer range");
    if (learning_rate.empty() || subsample.empty() || colsample.empty() || lambda.empty())
      throw InvalidArgument("search space: empty choice list");
  }
};

struct SearchTrial {
  std::size_t index = 0;
  GbtParams params;
  double rmse = 0.0;

  bool operator==(const SearchTrial&) const = default;
};

struct SearchResult {
  GbtParams best;
  double best_rmse = 0.0;
  std::vector<SearchTrial> trials;
};

namespace detail {

inline int draw_int(std::mt19937_64& rng, std::pair<int, int> r) {
  const auto width = static_cast<std::uint64_t>(static_cast<std::int64_t>(r.second) - r.first + 1);
  return r.first + static_cast<int>(rng() % width);
}

inline double draw_choice(std::mt19937_64& rng, const std::vector<double>& xs) { return xs[rng() % xs.size()]; }

inline GbtParams draw_params(std::mt19937_64& rng, const SearchSpace& space) {
  GbtParams p;
  p.n_trees = draw_int(rng, space.n_trees);
  p.max_depth = draw_int(rng, space.max_depth);
  p.learning_rate = draw_choice(rng, space.learning_rate);
  p.min_leaf = draw_int(rng, space.min_leaf);
  p.subsample = draw_choice(rng, space.subsample);
  p.colsample = draw_choice(rng, space.colsample);
  p.lambda = draw_choice(rng, space.lambda);
  p.target_transform = space.target_transform;
  return p;
}

/// SplitMix64 step, used to derive independent sub-seeds from one seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double rmse(const GbtModel& model, std::span<const TrainingExample> examples) {
  double ss = 0.0;
  for (const auto& e : examples) {
    const double r = predict(model, e.features) - e.target;
    ss += r * r;
  }
  return examples.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(examples.size()));
}

inline bool better_trial(const SearchTrial& a, const SearchTrial& b) {
  if (a.rmse != b.rmse) return a.rmse < b.rmse;
  if (a.params.n_trees != b.params.n_trees) return a.params.n_trees < b.params.n_trees;
  return a.params.max_depth < b.params.max_depth;
}

}  // namespace detail

/// Draws `k` configurations and scores each by RMSE on an 80/20 holdout of
/// `train`. Every trial uses the same holdout and the same training seed.
inline SearchResult random_search(std::span<const TrainingExample> train, const FeatureSchema& schema,
                                  const SearchSpace& space, std::size_t k, std::uint64_t seed) {
  space.validate();
  if (k == 0) throw InvalidArgument("random_search: k must be >= 1");
  const auto [inner_train, holdout] = split_dataset(train, 0.8, detail::derive_seed(seed, 1));
  if (inner_train.size() < 2 || holdout.empty()) throw InvalidArgument("random_search: training set too small");
  const std::uint64_t train_seed = detail::derive_seed(seed, 2);

  std::mt19937_64 rng(detail::derive_seed(seed, 0));
  SearchResult result;
  for (std::size_t i = 0; i < k; ++i) {
    SearchTrial trial{i, detail::draw_params(rng, space), 0.0};
    const GbtModel model = train_gbt(inner_train, schema, trial.params, train_seed);
    trial.rmse = detail::rmse(model, holdout);
    result.trials.push_back(trial);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.trials.size(); ++i)
    if (detail::better_trial(result.trials[i], result.trials[best])) best = i;
  result.best = result.trials[best].params;
  result.best_rmse = result.trials[best].rmse;
  return result;
}

}  // namespace metaland
