#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "defistress/protocol.hpp"

namespace defistress {

struct GbmParams {
  double p0 = 1.0;     // initial price
  double mu = 0.0;     // drift per day
  double sigma = 0.0;  // volatility per sqrt(day)

  void validate() const;
};

// Row-major n_paths x (horizon_days + 1) prices; column 0 is p0.
class PriceMatrix {
 public:
  PriceMatrix() = default;
  PriceMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> values() const noexcept { return data_; }

  bool operator==(const PriceMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct PathEnsemble {
  int horizon_days = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  double correlation = 0.0;
  PriceMatrix collateral;
  PriceMatrix reserve;
};

/// P[k][t] = p0 * exp((mu - sigma^2 / 2) t + sigma W_t), W_t the running sum of
/// daily N(0,1) increments drawn from substream (seed, k, 0). Path k is the
/// same no matter how many paths are requested or how many threads run.
PriceMatrix simulate_gbm(const GbmParams& params, int horizon_days, std::size_t n_paths,
                         std::uint64_t seed, unsigned threads = 1);

/// Collateral increments come from substream (seed, k, 0), exactly as in
/// simulate_gbm; reserve increments are rho * z_col + sqrt(1 - rho^2) * z'
/// with z' from substream (seed, k, 1).
PathEnsemble simulate_correlated(const GbmParams& collateral, const GbmParams& reserve,
                                 double rho, int horizon_days, std::size_t n_paths,
                                 std::uint64_t seed, unsigned threads = 1);

struct WorstPath {
  std::size_t path_index = 0;
  std::optional<int> first_negative_day;
  double terminal_margin = 0.0;
  // Lowest terminal margin over the whole ensemble (any path).
  double min_terminal_margin = 0.0;
};

/// Runs the liquidation engine on every path and returns the path whose
/// margin first turns negative earliest (ties: lowest index). When no path
/// goes negative, returns the path with the lowest terminal margin.
WorstPath fastest_undercollateralization(const PathEnsemble& ensemble,
                                         const ProtocolState& initial,
                                         const LiquidityModel& liquidity,
                                         unsigned threads = 1);

}  // namespace defistress
