#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace defistress {

struct Ohlcv {
  std::chrono::year_month_day date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double volume = 0.0;
};

// Daily observations, strictly increasing in date, all prices > 0.
class PriceSeries {
 public:
  PriceSeries() = default;
  // Validates the invariants; throws Error on violation.
  explicit PriceSeries(std::vector<Ohlcv> observations);

  std::span<const Ohlcv> observations() const noexcept { return obs_; }
  std::size_t size() const noexcept { return obs_.size(); }
  std::vector<double> closes() const;

 private:
  std::vector<Ohlcv> obs_;
};

struct ReturnStats {
  double mu = 0.0;     // mean daily log-return
  double sigma = 0.0;  // sample standard deviation, ddof = 1
  std::size_t n = 0;
};

struct JarqueBera {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Parses `date,open,high,low,close,volume` CSV text with a header row and
/// ISO-8601 dates. Blank lines are skipped.
PriceSeries parse_series_csv(std::string_view text);
PriceSeries load_series(const std::filesystem::path& path);

/// ln(close[t+1] / close[t]) between consecutive rows; missing days are not
/// filled in.
std::vector<double> log_returns(const PriceSeries& series);

ReturnStats estimate_stats(std::span<const double> returns);

/// Statistic n/6 (S^2 + (K-3)^2/4) from population skewness and kurtosis;
/// p-value from the chi-squared(2) survival function exp(-x/2).
JarqueBera jarque_bera(std::span<const double> returns);

}  // namespace defistress
