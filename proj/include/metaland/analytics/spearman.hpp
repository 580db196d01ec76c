#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "metaland/core/types.hpp"

namespace metaland {

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

/// Pearson correlation; nullopt when either input has zero variance.
inline std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n != b.size()) throw InvalidArgument("pearson: length mismatch");
  if (n == 0) return std::nullopt;
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Spearman coefficient of two equally long samples (>= 3 points).
/// nullopt when either sample has zero rank variance.
inline std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("spearman: length mismatch");
  if (a.size() < 3) throw DataError("spearman: needs at least 3 paired points");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

/// Spearman coefficient over the dates two series have in common.
inline std::optional<double> spearman(const Series& a, const Series& b) {
  std::vector<double> va, vb;
  auto ia = a.points().begin();
  auto ib = b.points().begin();
  while (ia != a.points().end() && ib != b.points().end()) {
    if (ia->date < ib->date) {
      ++ia;
    } else if (ib->date < ia->date) {
      ++ib;
    } else {
      va.push_back(ia->value);
      vb.push_back(ib->value);
      ++ia;
      ++ib;
    }
  }
  if (va.size() < 3)
    throw DataError("spearman: '" + a.name() + "' and '" + b.name() + "' share " + std::to_string(va.size()) +
                    " dates, needs 3");
  return spearman(std::span<const double>(va), std::span<const double>(vb));
}

}  // namespace metaland
