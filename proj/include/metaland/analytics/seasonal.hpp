#pragma once

#include <numeric>
#include <vector>

#include "metaland/core/types.hpp"

namespace metaland {

/// Expands a series onto a contiguous daily grid, filling missing days by
/// linear interpolation between their neighbours.
inline Series fill_daily_gaps(const Series& s, std::vector<Day>* filled = nullptr) {
  std::vector<SeriesPoint> out;
  const auto& pts = s.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) {
      const long gap = days_between(pts[i - 1].date, pts[i].date);
      for (long k = 1; k < gap; ++k) {
        const double w = static_cast<double>(k) / static_cast<double>(gap);
        const Day d = pts[i - 1].date + std::chrono::days{k};
        out.push_back({d, pts[i - 1].value + w * (pts[i].value - pts[i - 1].value)});
        if (filled) filled->push_back(d);
      }
    }
    out.push_back(pts[i]);
  }
  return Series(s.name(), std::move(out));
}

/// Position of a day inside a cycle of `period` days (for 7: a fixed weekday).
inline int cycle_position(Day day, int period) {
  const long n = day.time_since_epoch().count();
  return static_cast<int>(((n % period) + period) % period);
}

/// Seasonal indices of a contiguous daily series under classical additive
/// decomposition: trend is the centred moving average of length `period`
/// (2 x period for even periods), index k is the mean detrended value at
/// cycle position k, re-centred to zero mean.
inline std::vector<double> seasonal_indices(const Series& contiguous, int period) {
  const auto& pts = contiguous.points();
  const std::size_t n = pts.size();
  const std::size_t p = static_cast<std::size_t>(period);
  const std::size_t h = p / 2;
  std::vector<double> sum(p, 0.0);
  std::vector<std::size_t> count(p, 0);
  for (std::size_t i = h; i + h < n; ++i) {
    double trend = 0.0;
    if (p % 2 == 1) {
      for (std::size_t j = i - h; j <= i + h; ++j) trend += pts[j].value;
      trend /= static_cast<double>(p);
    } else {
      trend = 0.5 * (pts[i - h].value + pts[i + h].value);
      for (std::size_t j = i - h + 1; j < i + h; ++j) trend += pts[j].value;
      trend /= static_cast<double>(p);
    }
    const auto k = static_cast<std::size_t>(cycle_position(pts[i].date, period));
    sum[k] += pts[i].value - trend;
    ++count[k];
  }
  std::vector<double> idx(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) idx[k] = count[k] ? sum[k] / static_cast<double>(count[k]) : 0.0;
  const double mean = std::accumulate(idx.begin(), idx.end(), 0.0) / static_cast<double>(p);
  for (auto& v : idx) v -= mean;
  return idx;
}

struct Deseasonalized {
  Series series;                 // same dates as the input
  std::vector<double> indices;   // seasonal index per cycle position
  std::vector<Day> filled_days;  // grid days interpolated before estimation
};

/// Removes the additive seasonal component of period `period` (default
/// weekly). Requires at least 2 * period points on the daily grid.
inline Deseasonalized deseasonalize(const Series& s, int period = 7) {
  if (period < 2) throw InvalidArgument("deseasonalize: period must be >= 2");
  Deseasonalized out;
  const Series grid = fill_daily_gaps(s, &out.filled_days);
  if (grid.size() < 2 * static_cast<std::size_t>(period))
    throw DataError("deseasonalize: series '" + s.name() + "' has " + std::to_string(grid.size()) +
                    " daily points, needs " + std::to_string(2 * period));
  out.indices = seasonal_indices(grid, period);
  std::vector<SeriesPoint> adjusted;
  adjusted.reserve(s.size());
  for (const auto& pt : s.points())
    adjusted.push_back({pt.date, pt.value - out.indices[static_cast<std::size_t>(cycle_position(pt.date, period))]});
  out.series = Series(s.name(), std::move(adjusted));
  return out;
}

/// Mean value per cycle position; used to measure remaining seasonality.
inline std::vector<double> cycle_means(const Series& s, int period) {
  std::vector<double> sum(static_cast<std::size_t>(period), 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(period), 0);
  for (const auto& pt : s.points()) {
    const auto k = static_cast<std::size_t>(cycle_position(pt.date, period));
    sum[k] += pt.value;
    ++count[k];
  }
  for (std::size_t k = 0; k < sum.size(); ++k)
    if (count[k]) sum[k] /= static_cast<double>(count[k]);
  return sum;
}

}  // namespace metaland
