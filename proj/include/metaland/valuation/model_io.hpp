#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "metaland/core/enum_names.hpp"
#include "metaland/core/error.hpp"
#include "metaland/ingest/json_fields.hpp"
#include "metaland/valuation/evaluate.hpp"
#include "metaland/valuation/gbt.hpp"
#include "metaland/valuation/search.hpp"

namespace metaland {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFormat = "metaland-gbt";

namespace detail {

inline constexpr EnumNames<FeatureKind, 2> kFeatureKindNames{
    {{FeatureKind::numeric, "numeric"}, {FeatureKind::categorical, "categorical"}}};
inline constexpr EnumNames<FeatureSource, 5> kFeatureSourceNames{{{FeatureSource::parcel, "parcel"},
                                                                   {FeatureSource::daily_series, "daily_series"},
                                                                   {FeatureSource::traffic_window, "traffic_window"},
                                                                   {FeatureSource::listings, "listings"},
                                                                   {FeatureSource::calendar, "calendar"}}};
inline constexpr EnumNames<TargetTransform, 2> kTransformNames{
    {{TargetTransform::identity, "identity"}, {TargetTransform::log1p, "log1p"}}};

}  // namespace detail

constexpr std::string_view to_string(TargetTransform t) { return detail::enum_to_string(detail::kTransformNames, t); }
inline TargetTransform parse_target_transform(std::string_view s) {
  return detail::enum_from_string(detail::kTransformNames, s, "target transform");
}

inline nlohmann::json to_json(const GbtParams& p) {
  return {{"n_trees", p.n_trees},     {"max_depth", p.max_depth}, {"learning_rate", p.learning_rate},
          {"min_leaf", p.min_leaf},   {"subsample", p.subsample}, {"colsample", p.colsample},
          {"lambda", p.lambda},       {"target_transform", to_string(p.target_transform)}};
}

inline GbtParams params_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  GbtParams p;
  p.n_trees = static_cast<int>(get_int(j, "n_trees", "model"));
  p.max_depth = static_cast<int>(get_int(j, "max_depth", "model"));
  p.learning_rate = get_double(j, "learning_rate", "model");
  p.min_leaf = static_cast<int>(get_int(j, "min_leaf", "model"));
  p.subsample = get_double(j, "subsample", "model");
  p.colsample = get_double(j, "colsample", "model");
  p.lambda = get_double(j, "lambda", "model");
  p.target_transform = has(j, "target_transform") ? parse_target_transform(get_string(j, "target_transform", "model"))
                                                   : TargetTransform::identity;
  return p;
}

inline nlohmann::json to_json(const FeatureSchema& s) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : s.features)
    features.push_back({{"name", f.name},
                        {"kind", detail::enum_to_string(detail::kFeatureKindNames, f.kind)},
                        {"source", detail::enum_to_string(detail::kFeatureSourceNames, f.source)},
                        {"group", f.group}});
  return {{"platform", to_string(s.platform)}, {"features", features}};
}

/// Feature metadata is re-derived from the catalogue; the stored fields must agree.
inline FeatureSchema schema_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  std::vector<std::string> names;
  for (const auto& f : require(j, "features", "model")) names.push_back(get_string(f, "name", "model"));
  FeatureSchema s = make_schema(parse_platform(get_string(j, "platform", "model")), names);
  const auto& stored = j.at("features");
  for (std::size_t i = 0; i < s.features.size(); ++i) {
    if (has(stored[i], "kind") && get_string(stored[i], "kind", "model") != detail::enum_to_string(detail::kFeatureKindNames, s.features[i].kind))
      throw ParseError("feature '" + s.features[i].name + "': kind disagrees with catalogue");
  }
  return s;
}

inline nlohmann::json to_json(const FeatureImportance& fi) {
  return {{"feature", fi.feature}, {"index", fi.index}, {"split_count", fi.split_count}, {"share", fi.share}};
}

inline nlohmann::json to_json(const EvalReport& r) {
  return {{"train_accuracy_pct", r.train_accuracy_pct}, {"test_accuracy_pct", r.test_accuracy_pct},
          {"mae_usd", r.mae_usd},                       {"rmse_usd", r.rmse_usd},
          {"n_train", r.n_train},                       {"n_test", r.n_test}};
}

inline EvalReport eval_report_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  return {get_double(j, "train_accuracy_pct", "model"), get_double(j, "test_accuracy_pct", "model"), get_double(j, "mae_usd", "model"),
          get_double(j, "rmse_usd", "model"),           get_uint(j, "n_train", "model"),             get_uint(j, "n_test", "model")};
}

inline nlohmann::json to_json(const SearchTrial& t) {
  return {{"index", t.index}, {"params", to_json(t.params)}, {"rmse", t.rmse}};
}

inline SearchTrial search_trial_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  return {get_uint(j, "index", "model"), params_from_json(require(j, "params", "model")), get_double(j, "rmse", "model")};
}

/// Model document. Object keys are emitted in sorted order and doubles in
/// shortest round-trip form, so equal models serialize to equal bytes.
inline nlohmann::json to_json(const GbtModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : m.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf())
        nodes.push_back({{"leaf", n.value}});
      else
        nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
    }
    trees.push_back(std::move(nodes));
  }
  nlohmann::json importance = nlohmann::json::array();
  for (const auto& fi : feature_importance(m)) importance.push_back(to_json(fi));
  return {{"format", kModelFormat},
          {"version", kModelFormatVersion},
          {"schema", to_json(m.schema)},
          {"params", to_json(m.params)},
          {"seed", m.seed},
          {"base_score", m.base_score},
          {"learning_rate", m.learning_rate},
          {"trees", trees},
          {"training_loss", m.training_loss},
          {"importance", importance}};
}

inline GbtModel model_from_json(const nlohmann::json& j) {
  using namespace json_fields;
  if (get_string(j, "format", "model") != kModelFormat) throw ParseError("not a model document");
  if (get_int(j, "version", "model") != kModelFormatVersion)
    throw ParseError("unsupported model version " + std::to_string(get_int(j, "version", "model")));
  GbtModel m;
  m.schema = schema_from_json(require(j, "schema", "model"));
  m.params = params_from_json(require(j, "params", "model"));
  m.seed = get_uint(j, "seed", "model");
  m.base_score = get_double(j, "base_score", "model");
  m.learning_rate = get_double(j, "learning_rate", "model");
  const auto width = static_cast<int>(m.schema.size());
  for (const auto& jt : require(j, "trees", "model")) {
    RegressionTree t;
    for (const auto& jn : jt) {
      TreeNode n;
      if (has(jn, "leaf")) {
        n.value = get_double(jn, "leaf", "model");
      } else {
        n.feature = static_cast<int>(get_int(jn, "feature", "model"));
        n.threshold = get_double(jn, "threshold", "model");
        n.left = static_cast<int>(get_int(jn, "left", "model"));
        n.right = static_cast<int>(get_int(jn, "right", "model"));
        if (n.feature < 0 || n.feature >= width) throw ParseError("tree node feature index out of range");
      }
      t.nodes.push_back(n);
    }
    const auto size = static_cast<int>(t.nodes.size());
    if (size == 0) throw ParseError("empty tree");
    // Children follow their parent, which also rules out cycles.
    for (int i = 0; i < size; ++i) {
      const TreeNode& n = t.nodes[static_cast<std::size_t>(i)];
      if (!n.is_leaf() && (n.left <= i || n.left >= size || n.right <= i || n.right >= size))
        throw ParseError("tree node child index out of range");
    }
    m.trees.push_back(std::move(t));
  }
  for (const auto& v : require(j, "training_loss", "model")) m.training_loss.push_back(v.get<double>());
  return m;
}

inline std::string serialize_model(const GbtModel& m) { return to_json(m).dump(1) + "\n"; }

inline GbtModel parse_model(std::string_view text) {
  const auto doc = json_fields::parse_document(text, "model");
  try {
    return model_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

}  // namespace metaland
