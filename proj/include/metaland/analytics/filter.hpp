#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "metaland/core/types.hpp"

namespace metaland {

struct FilterReport {
  PlatformId platform = PlatformId::sandbox;
  Decimal considered_volume_usd;
  Decimal discarded_volume_usd;
  std::size_t considered_count = 0;
  std::size_t discarded_count = 0;
  Decimal threshold_usd;

  bool operator==(const FilterReport&) const = default;
};

struct FilterResult {
  std::vector<Trade> kept;
  std::vector<Trade> discarded;
  FilterReport report;
};

/// 1-based nearest-rank index: ceil(p * n), clamped to [1, n].
inline std::size_t nearest_rank(double percentile, std::size_t n) {
  if (n == 0) return 0;
  const double raw = percentile * static_cast<double>(n);
  // Absorb representation error so that e.g. 0.99 * 200 ranks as 198.
  const double nearest = std::round(raw);
  const double rank = std::fabs(raw - nearest) < 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
  return std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, n);
}

/// Drops trades priced above the nearest-rank percentile of amount_usd.
/// Input must be one platform's economic trades; order is preserved.
inline FilterResult filter_trades(std::span<const Trade> trades, double percentile = 0.99,
                                  std::optional<PlatformId> platform = std::nullopt) {
  if (!(percentile > 0.0 && percentile <= 1.0)) throw InvalidArgument("filter_trades: percentile must be in (0, 1]");
  FilterResult out;
  out.report.platform = platform ? *platform : (trades.empty() ? PlatformId::sandbox : trades.front().platform);
  if (trades.empty()) return out;

  std::vector<Decimal> prices;
  prices.reserve(trades.size());
  for (const auto& t : trades) {
    if (t.platform != out.report.platform) throw InvalidArgument("filter_trades: trades span several platforms");
    if (!t.economic) throw InvalidArgument("filter_trades: non-economic trade in input");
    prices.push_back(t.amount_usd);
  }
  const std::size_t rank = nearest_rank(percentile, prices.size());
  std::nth_element(prices.begin(), prices.begin() + static_cast<std::ptrdiff_t>(rank - 1), prices.end());
  const Decimal threshold = prices[rank - 1];

  out.report.threshold_usd = threshold;
  for (const auto& t : trades) {
    if (t.amount_usd <= threshold) {
      out.report.considered_volume_usd += t.amount_usd;
      ++out.report.considered_count;
      out.kept.push_back(t);
    } else {
      out.report.discarded_volume_usd += t.amount_usd;
      ++out.report.discarded_count;
      out.discarded.push_back(t);
    }
  }
  return out;
}

inline std::vector<Trade> economic_trades(std::span<const Trade> trades) {
  std::vector<Trade> out;
  for (const auto& t : trades)
    if (t.economic) out.push_back(t);
  return out;
}

}  // namespace metaland
