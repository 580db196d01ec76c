#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "metaland/core/error.hpp"
#include "metaland/valuation/features.hpp"
#include "metaland/valuation/schema.hpp"

namespace metaland {

enum class TargetTransform { identity, log1p };

struct GbtParams {
  int n_trees = 100;
  int max_depth = 4;
  double learning_rate = 0.1;
  int min_leaf = 1;         // minimum examples in each child of a split
  double subsample = 1.0;   // row fraction drawn per tree
  double colsample = 1.0;   // feature fraction drawn per tree
  double lambda = 1.0;      // L2 penalty on leaf weights
  TargetTransform target_transform = TargetTransform::identity;

  bool operator==(const GbtParams&) const = default;

  void validate() const {
    if (n_trees < 0) throw InvalidArgument("gbt: n_trees must be >= 0");
    if (max_depth < 1) throw InvalidArgument("gbt: max_depth must be >= 1");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw InvalidArgument("gbt: learning_rate must be in (0, 1]");
    if (min_leaf < 1) throw InvalidArgument("gbt: min_leaf must be >= 1");
    if (!(subsample > 0.0 && subsample <= 1.0)) throw InvalidArgument("gbt: subsample must be in (0, 1]");
    if (!(colsample > 0.0 && colsample <= 1.0)) throw InvalidArgument("gbt: colsample must be in (0, 1]");
    if (!(lambda >= 0.0)) throw InvalidArgument("gbt: lambda must be >= 0");
  }
};

/// Internal node when `feature >= 0` (rows with x[feature] < threshold go
/// left), leaf otherwise. Leaf `value` is the unscaled weight -G/(H+lambda).
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double leaf_value(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf())
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[i].feature)] < nodes[i].threshold ? nodes[i].left
                                                                                                        : nodes[i].right);
    return nodes[i].value;
  }

  bool operator==(const RegressionTree&) const = default;
};

struct GbtModel {
  FeatureSchema schema;
  GbtParams params;
  std::uint64_t seed = 0;
  double base_score = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
  std::vector<double> training_loss;  // MSE on the training set after each tree

  bool operator==(const GbtModel&) const = default;
};

namespace detail {

/// Column-major copy of the feature matrix with per-feature sorted row order.
struct ColumnData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> columns;
  std::vector<std::vector<std::uint32_t>> sorted;

  explicit ColumnData(std::span<const TrainingExample> examples, std::size_t n_features)
      : rows(examples.size()), cols(n_features), columns(n_features), sorted(n_features) {
    for (std::size_t f = 0; f < cols; ++f) {
      columns[f].resize(rows);
      for (std::size_t r = 0; r < rows; ++r) columns[f][r] = examples[r].features[f];
      sorted[f].resize(rows);
      std::iota(sorted[f].begin(), sorted[f].end(), 0u);
      const auto& col = columns[f];
      std::stable_sort(sorted[f].begin(), sorted[f].end(), [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }
  }
};

inline double split_threshold(double lo, double hi) {
  const double mid = lo + 0.5 * (hi - lo);
  return lo < mid ? mid : hi;
}

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

/// Exact greedy level-wise tree on gradients `grad` (hessian 1 per row).
/// `node_of[r]` is 0 for rows in the sample and -1 otherwise.
inline RegressionTree build_tree(const ColumnData& data, std::span<const double> grad, std::vector<int>& node_of,
                                 std::span<const std::size_t> features, const GbtParams& params) {
  RegressionTree tree;
  std::vector<double> node_g{0.0};
  std::vector<double> node_h{0.0};
  tree.nodes.emplace_back();
  for (std::size_t r = 0; r < data.rows; ++r) {
    if (node_of[r] == 0) {
      node_g[0] += grad[r];
      node_h[0] += 1.0;
    }
  }
  const double lambda = params.lambda;
  const double min_leaf = params.min_leaf;
  auto score = [lambda](double g, double h) { return g * g / (h + lambda); };

  std::vector<int> frontier{0};
  struct ScanState {
    double g = 0.0;
    double h = 0.0;
    double last = 0.0;
    bool seen = false;
  };
  for (int depth = 0; depth < params.max_depth && !frontier.empty(); ++depth) {
    std::vector<int> slot_of(tree.nodes.size(), -1);
    for (std::size_t s = 0; s < frontier.size(); ++s) slot_of[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
    std::vector<SplitCandidate> best(frontier.size());
    std::vector<ScanState> state(frontier.size());

    for (std::size_t f : features) {
      std::fill(state.begin(), state.end(), ScanState{});
      const auto& col = data.columns[f];
      for (std::uint32_t r : data.sorted[f]) {
        const int node = node_of[r];
        if (node < 0) continue;
        const int slot = slot_of[static_cast<std::size_t>(node)];
        if (slot < 0) continue;
        ScanState& st = state[static_cast<std::size_t>(slot)];
        const double x = col[r];
        if (st.seen && x > st.last) {
          const double g = node_g[static_cast<std::size_t>(node)];
          const double h = node_h[static_cast<std::size_t>(node)];
          if (st.h >= min_leaf && h - st.h >= min_leaf) {
            const double gain = score(st.g, st.h) + score(g - st.g, h - st.h) - score(g, h);
            SplitCandidate& b = best[static_cast<std::size_t>(slot)];
            if (gain > b.gain) b = {gain, static_cast<int>(f), split_threshold(st.last, x)};
          }
        }
        st.g += grad[r];
        st.h += 1.0;
        st.last = x;
        st.seen = true;
      }
    }

    std::vector<int> next;
    std::vector<int> left_of(tree.nodes.size(), -1);
    for (std::size_t s = 0; s < frontier.size(); ++s) {
      const SplitCandidate& b = best[s];
      if (b.feature < 0) continue;
      const auto id = static_cast<std::size_t>(frontier[s]);
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      node_g.push_back(0.0);
      node_g.push_back(0.0);
      node_h.push_back(0.0);
      node_h.push_back(0.0);
      tree.nodes[id].feature = b.feature;
      tree.nodes[id].threshold = b.threshold;
      tree.nodes[id].left = left;
      tree.nodes[id].right = left + 1;
      left_of[id] = left;
      next.push_back(left);
      next.push_back(left + 1);
    }
    if (next.empty()) break;
    for (std::size_t r = 0; r < data.rows; ++r) {
      const int node = node_of[r];
      if (node < 0 || left_of[static_cast<std::size_t>(node)] < 0) continue;
      const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
      const int child = data.columns[static_cast<std::size_t>(n.feature)][r] < n.threshold ? n.left : n.right;
      node_of[r] = child;
      node_g[static_cast<std::size_t>(child)] += grad[r];
      node_h[static_cast<std::size_t>(child)] += 1.0;
    }
    frontier = std::move(next);
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i)
    if (tree.nodes[i].is_leaf()) tree.nodes[i].value = -node_g[i] / (node_h[i] + lambda);
  return tree;
}

inline double transform_target(double y, TargetTransform t) {
  return t == TargetTransform::log1p ? std::log1p(std::max(y, 0.0)) : y;
}

inline double inverse_target(double y, TargetTransform t) { return t == TargetTransform::log1p ? std::expm1(y) : y; }

}  // namespace detail

/// Raw ensemble output (on the transformed target scale).
inline double predict_raw(const GbtModel& model, std::span<const double> features) {
  double out = 0.0;
  for (const auto& tree : model.trees) out += tree.leaf_value(features);
  return model.base_score + model.learning_rate * out;
}

/// Predicted price in USD: base_score + learning_rate * sum of leaf values,
/// mapped back through the target transform.
inline double predict(const GbtModel& model, std::span<const double> features) {
  if (features.size() != model.schema.size())
    throw InvalidArgument("predict: expected " + std::to_string(model.schema.size()) + " features, got " +
                          std::to_string(features.size()));
  return detail::inverse_target(predict_raw(model, features), model.params.target_transform);
}

inline std::vector<double> predict_batch(const GbtModel& model, std::span<const TrainingExample> examples) {
  std::vector<double> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(predict(model, e.features));
  return out;
}

/// Squared-error gradient boosting with exact greedy split search.
inline GbtModel train_gbt(std::span<const TrainingExample> examples, const FeatureSchema& schema, const GbtParams& params,
                          std::uint64_t seed) {
  params.validate();
  if (examples.size() < 2) throw InvalidArgument("gbt: needs at least 2 training examples");
  const std::size_t n = examples.size();
  const std::size_t n_features = schema.size();
  for (const auto& e : examples)
    if (e.features.size() != n_features) throw InvalidArgument("gbt: example width does not match schema");

  GbtModel model;
  model.schema = schema;
  model.params = params;
  model.seed = seed;
  model.learning_rate = params.learning_rate;

  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = detail::transform_target(examples[i].target, params.target_transform);
  // Running mean: exact for constant targets.
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += (target[i] - mean) / static_cast<double>(i + 1);
  model.base_score = mean;

  const detail::ColumnData data(examples, n_features);
  std::vector<double> pred(n, mean);
  std::vector<double> grad(n);
  std::vector<int> node_of(n);
  std::vector<std::size_t> row_order(n);
  std::vector<std::size_t> all_features(n_features);
  std::iota(all_features.begin(), all_features.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  const auto n_rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.subsample * static_cast<double>(n))));
  const auto n_cols = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(params.colsample * static_cast<double>(n_features) - 1e-9)));

  for (int t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) grad[i] = pred[i] - target[i];
    if (n_rows < n) {
      std::iota(row_order.begin(), row_order.end(), std::size_t{0});
      std::shuffle(row_order.begin(), row_order.end(), rng);
      std::fill(node_of.begin(), node_of.end(), -1);
      for (std::size_t i = 0; i < n_rows; ++i) node_of[row_order[i]] = 0;
    } else {
      std::fill(node_of.begin(), node_of.end(), 0);
    }
    std::vector<std::size_t> features = all_features;
    if (n_cols < n_features) {
      std::shuffle(features.begin(), features.end(), rng);
      features.resize(n_cols);
      std::sort(features.begin(), features.end());
    }
    RegressionTree tree = detail::build_tree(data, grad, node_of, features, params);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] += params.learning_rate * tree.leaf_value(examples[i].features);
      const double r = target[i] - pred[i];
      loss += r * r;
    }
    model.training_loss.push_back(loss / static_cast<double>(n));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

struct FeatureImportance {
  std::string feature;
  std::size_t index = 0;
  std::size_t split_count = 0;
  double share = 0.0;

  bool operator==(const FeatureImportance&) const = default;
};

/// Split-count ("weight") importance, descending; unused features omitted.
inline std::vector<FeatureImportance> feature_importance(const GbtModel& model) {
  std::vector<std::size_t> counts(model.schema.size(), 0);
  std::size_t total = 0;
  for (const auto& tree : model.trees)
    for (const auto& node : tree.nodes)
      if (!node.is_leaf()) {
        ++counts[static_cast<std::size_t>(node.feature)];
        ++total;
      }
  std::vector<FeatureImportance> out;
  for (std::size_t f = 0; f < counts.size(); ++f)
    if (counts[f] > 0)
      out.push_back({model.schema.features[f].name, f, counts[f], static_cast<double>(counts[f]) / static_cast<double>(total)});
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) { return a.split_count > b.split_count; });
  return out;
}

/// Importance share summed per feature group, descending.
inline std::vector<std::pair<std::string, double>> group_importance(const GbtModel& model) {
  std::map<std::string, double> by_group;
  for (const auto& fi : feature_importance(model)) by_group[model.schema.features[fi.index].group] += fi.share;
  std::vector<std::pair<std::string, double>> out(by_group.begin(), by_group.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace metaland
