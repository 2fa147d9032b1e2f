#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "defistress/paths.hpp"
#include "defistress/protocol.hpp"

namespace defistress {

struct LiquidityRegime {
  std::string label;
  LiquidityModel model;
};

struct ScenarioConfig {
  GbmParams collateral;
  GbmParams reserve;
  double rho_corr = 0.9;
  int horizon_days = 100;
  std::size_t n_paths = 5000;
  std::uint64_t seed = 0;
  std::vector<double> debt_levels;
  std::vector<LiquidityRegime> liquidity_regimes;
  double reserve_quantity = 1'000'000.0;
  // Collateral value / debt at the start of the sell-off.
  double collateral_ratio = 1.5;

  void validate() const;

  // ETH-like collateral from the Jan 2018 - Feb 2020 calibration, reserve at
  // the same start price with half the volatility, debt 100m..400m and the
  // three liquidity regimes (constant, mild decay 0.005, decay 0.01).
  static ScenarioConfig baseline();
};

// One collateral position of debt * collateral_ratio / p0 units plus the
// configured reserve.
ProtocolState initial_state(const ScenarioConfig& config, double debt);

struct CellResult {
  double debt = 0.0;
  LiquidityRegime regime;
  std::size_t path_index = 0;
  std::optional<int> first_negative_day;
  double terminal_margin = 0.0;      // of the selected path
  double min_terminal_margin = 0.0;  // over all paths
  LiquidationTrace trace;
};

// Cells are stored debt-major: index = debt_index * regimes + regime_index.
struct StressReport {
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  double rho_corr = 0.0;
  std::size_t n_debt_levels = 0;
  std::size_t n_regimes = 0;
  std::vector<CellResult> cells;

  const CellResult& cell(std::size_t debt_index, std::size_t regime_index) const {
    return cells.at(debt_index * n_regimes + regime_index);
  }
};

struct RunOptions {
  unsigned threads = 1;
  // Called on the calling thread after each finished cell.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Simulates one shared ensemble and picks the fastest-undercollateralization
/// path separately for every (debt, regime) cell.
StressReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Cell evaluation over an existing ensemble.
StressReport evaluate_cells(const ScenarioConfig& config, const PathEnsemble& ensemble,
                            const RunOptions& options = {});

struct Heatmap {
  std::vector<double> debt_grid;
  std::vector<double> l0_grid;
  double liquidity_decay = 0.0;
  std::vector<std::optional<int>> days;  // row-major, rows = debt levels

  std::optional<int> at(std::size_t debt_index, std::size_t l0_index) const {
    return days.at(debt_index * l0_grid.size() + l0_index);
  }
};

/// Worst-case days until the margin turns negative for every (debt, l0) pair,
/// all cells drawn from the base config's ensemble.
Heatmap heatmap(const ScenarioConfig& base, std::span<const double> debt_grid,
                std::span<const double> l0_grid, double liquidity_decay,
                const RunOptions& options = {});

/// One report per correlation, all from the same seed. Order follows `rhos`.
std::vector<std::pair<double, StressReport>> correlation_sweep(const ScenarioConfig& base,
                                                               std::span<const double> rhos,
                                                               const RunOptions& options = {});

}  // namespace defistress
