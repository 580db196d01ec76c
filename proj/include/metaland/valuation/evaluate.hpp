#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "metaland/valuation/gbt.hpp"

namespace metaland {

struct EvalReport {
  double train_accuracy_pct = 0.0;
  double test_accuracy_pct = 0.0;
  double mae_usd = 0.0;   // on the test split
  double rmse_usd = 0.0;  // on the test split
  std::size_t n_train = 0;
  std::size_t n_test = 0;

  bool operator==(const EvalReport&) const = default;
};

/// max(0, R^2) * 100. A constant target scores 100 when reproduced exactly
/// and 0 otherwise.
inline double accuracy_pct(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) throw InvalidArgument("accuracy_pct: size mismatch");
  if (actual.empty()) return 0.0;
  double mean = 0.0;
  for (double a : actual) mean += a;
  mean /= static_cast<double>(actual.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 100.0 : 0.0;
  return std::max(0.0, 1.0 - ss_res / ss_tot) * 100.0;
}

inline EvalReport evaluate(const GbtModel& model, std::span<const TrainingExample> train,
                           std::span<const TrainingExample> test) {
  auto targets = [](std::span<const TrainingExample> xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& e : xs) out.push_back(e.target);
    return out;
  };
  EvalReport r;
  r.n_train = train.size();
  r.n_test = test.size();
  const auto train_pred = predict_batch(model, train);
  const auto test_pred = predict_batch(model, test);
  r.train_accuracy_pct = accuracy_pct(targets(train), train_pred);
  r.test_accuracy_pct = accuracy_pct(targets(test), test_pred);
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double e = test_pred[i] - test[i].target;
    abs_sum += std::abs(e);
    sq_sum += e * e;
  }
  if (!test.empty()) {
    r.mae_usd = abs_sum / static_cast<double>(test.size());
    r.rmse_usd = std::sqrt(sq_sum / static_cast<double>(test.size()));
  }
  return r;
}

}  // namespace metaland
