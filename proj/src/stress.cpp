#include "defistress/stress.hpp"

#include <cmath>

#include "defistress/error.hpp"

namespace defistress {

namespace {

// Daily ETH/USD log-return moments reported for 2018-01-01..2020-02-07 and the
// 2020-02-07 close used as the common start price.
constexpr double kEthMu = 0.001592;
constexpr double kEthSigma = 0.050581;
constexpr double kEthClose = 223.0;

}  // namespace

void ScenarioConfig::validate() const {
  collateral.validate();
  reserve.validate();
  if (!(rho_corr >= -1.0 && rho_corr <= 1.0))
    throw Error(ErrorCode::InvalidParams, "rho_corr must lie in [-1, 1]");
  if (horizon_days < 1) throw Error(ErrorCode::InvalidParams, "horizon_days must be >= 1");
  if (n_paths < 1) throw Error(ErrorCode::InvalidParams, "n_paths must be >= 1");
  if (debt_levels.empty()) throw Error(ErrorCode::InvalidParams, "debt_levels must be non-empty");
  for (double d : debt_levels)
    if (!(d > 0) || !std::isfinite(d))
      throw Error(ErrorCode::InvalidParams, "debt levels must be positive");
  if (liquidity_regimes.empty())
    throw Error(ErrorCode::InvalidParams, "liquidity_regimes must be non-empty");
  for (const auto& r : liquidity_regimes) r.model.validate();
  if (!(reserve_quantity >= 0))
    throw Error(ErrorCode::InvalidParams, "reserve_quantity must be non-negative");
  if (!(collateral_ratio > 0))
    throw Error(ErrorCode::InvalidParams, "collateral_ratio must be positive");
}

ScenarioConfig ScenarioConfig::baseline() {
  ScenarioConfig c;
  c.collateral = {kEthClose, kEthMu, kEthSigma};
  c.reserve = {kEthClose, kEthMu, kEthSigma / 2.0};
  c.rho_corr = 0.9;
  c.horizon_days = 100;
  c.n_paths = 5000;
  c.seed = 20200207;
  c.debt_levels = {100e6, 200e6, 300e6, 400e6};
  c.liquidity_regimes = {{"constant", {30000.0, 0.0}},
                         {"mild_illiquidity", {30000.0, 0.005}},
                         {"illiquidity", {30000.0, 0.01}}};
  c.reserve_quantity = 1'000'000.0;
  c.collateral_ratio = 1.5;
  return c;
}

ProtocolState initial_state(const ScenarioConfig& config, double debt) {
  ProtocolState s;
  s.positions.push_back({"collateral", debt * config.collateral_ratio / config.collateral.p0, 0.0});
  s.reserve_quantity = config.reserve_quantity;
  s.debt = debt;
  return s;
}

StressReport evaluate_cells(const ScenarioConfig& config, const PathEnsemble& ensemble,
                            const RunOptions& options) {
  config.validate();
  if (ensemble.horizon_days != config.horizon_days)
    throw Error(ErrorCode::HorizonMismatch, "ensemble horizon differs from the scenario horizon");

  StressReport report;
  report.seed = ensemble.seed;
  report.n_paths = ensemble.n_paths;
  report.rho_corr = ensemble.correlation;
  report.n_debt_levels = config.debt_levels.size();
  report.n_regimes = config.liquidity_regimes.size();
  const std::size_t total = report.n_debt_levels * report.n_regimes;
  report.cells.reserve(total);

  for (double debt : config.debt_levels) {
    const auto state = initial_state(config, debt);
    for (const auto& regime : config.liquidity_regimes) {
      const auto worst = fastest_undercollateralization(ensemble, state, regime.model, options.threads);
      CellResult cell;
      cell.debt = debt;
      cell.regime = regime;
      cell.path_index = worst.path_index;
      cell.first_negative_day = worst.first_negative_day;
      cell.terminal_margin = worst.terminal_margin;
      cell.min_terminal_margin = worst.min_terminal_margin;
      cell.trace = run_liquidation(state, ensemble.collateral.row(worst.path_index),
                                   ensemble.reserve.row(worst.path_index), regime.model);
      report.cells.push_back(std::move(cell));
      if (options.progress) options.progress(report.cells.size(), total);
    }
  }
  return report;
}

StressReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();
  const auto ensemble = simulate_correlated(config.collateral, config.reserve, config.rho_corr,
                                            config.horizon_days, config.n_paths, config.seed,
                                            options.threads);
  return evaluate_cells(config, ensemble, options);
}

Heatmap heatmap(const ScenarioConfig& base, std::span<const double> debt_grid,
                std::span<const double> l0_grid, double liquidity_decay,
                const RunOptions& options) {
  if (debt_grid.empty() || l0_grid.empty())
    throw Error(ErrorCode::InvalidParams, "heatmap grids must be non-empty");
  for (double l0 : l0_grid)
    if (!(l0 >= 0)) throw Error(ErrorCode::InvalidParams, "l0 grid values must be non-negative");

  ScenarioConfig config = base;
  config.debt_levels.assign(debt_grid.begin(), debt_grid.end());
  config.liquidity_regimes.clear();
  for (double l0 : l0_grid) config.liquidity_regimes.push_back({"l0", {l0, liquidity_decay}});
  const auto report = run_scenario(config, options);

  Heatmap map;
  map.debt_grid = config.debt_levels;
  map.l0_grid.assign(l0_grid.begin(), l0_grid.end());
  map.liquidity_decay = liquidity_decay;
  map.days.reserve(report.cells.size());
  for (const auto& cell : report.cells) map.days.push_back(cell.first_negative_day);
  return map;
}

std::vector<std::pair<double, StressReport>> correlation_sweep(const ScenarioConfig& base,
                                                               std::span<const double> rhos,
                                                               const RunOptions& options) {
  std::vector<std::pair<double, StressReport>> out;
  out.reserve(rhos.size());
  for (double rho : rhos) {
    ScenarioConfig config = base;
    config.rho_corr = rho;
    out.emplace_back(rho, run_scenario(config, options));
  }
  return out;
}

}  // namespace defistress
