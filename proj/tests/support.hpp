#pragma once

#include <chrono>
#include <filesystem>
#include <random>
#include <string>

#include "metaland.hpp"

namespace testing_support {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("metaland-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline metaland::Timestamp ts(const char* text) { return metaland::parse_timestamp(text); }
inline metaland::Day day(const char* text) { return metaland::parse_day(text); }
inline metaland::Decimal dec(const char* text) { return metaland::Decimal::parse(text); }

inline metaland::Trade trade(metaland::TokenId token, const char* when, const char* usd, std::string exchange = "opensea",
                             std::string currency = "ETH", metaland::PlatformId p = metaland::PlatformId::decentraland) {
  metaland::Trade t;
  t.platform = p;
  t.token_id = token;
  t.timestamp = ts(when);
  t.exchange = std::move(exchange);
  t.currency = std::move(currency);
  t.amount_usd = dec(usd);
  t.amount_crypto = t.amount_usd;
  t.buyer = "0xb" + std::to_string(token);
  t.seller = "0xs" + std::to_string(token);
  t.economic = t.amount_usd.is_positive();
  return t;
}

/// Small world for fast end-to-end tests.
inline metaland::SyntheticConfig small_config() {
  metaland::SyntheticConfig c;
  c.grid_size = 10;
  c.n_pois = 2;
  c.n_days = 60;
  c.n_trades = 600;
  return c;
}

/// Pipeline settings with a narrow search so builds take well under a second.
inline metaland::PipelineConfig quick_pipeline() {
  metaland::PipelineConfig c;
  c.search_trials = 3;
  c.space.n_trees = {10, 30};
  c.space.max_depth = {2, 4};
  return c;
}

}  // namespace testing_support
