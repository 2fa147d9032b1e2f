#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace defistress {

// lambda here is the overcollateralization *factor* (0.5 means 150%). The
// contagion module uses the full multiplier instead (1.5 means 150%).
struct CollateralPosition {
  std::string asset_id;
  double quantity = 0.0;
  double lambda = 0.0;
};

struct ProtocolState {
  std::vector<CollateralPosition> positions;
  double reserve_quantity = 0.0;
  double debt = 0.0;

  // Throws InvalidParams on negative quantities, lambda or debt.
  void validate() const;
};

using PriceMap = std::map<std::string, double, std::less<>>;

/// Sum over positions of (1 + lambda_i) * P_i * Q_i, minus debt. The factor
/// sits on the collateral side as in the original margin definition, so
/// M >= 0 iff D <= (1 + lambda) * collateral value.
double margin_basic(const ProtocolState& state, const PriceMap& prices);

/// margin_basic plus the reserve pool's value P_reserve * Q_reserve.
double margin_with_reserve(const ProtocolState& state, const PriceMap& prices,
                           double reserve_price);

// Sellable collateral units per day, L(t) = l0 * exp(-rho * t).
struct LiquidityModel {
  double l0 = 0.0;
  double rho = 0.0;

  void validate() const;
};

double liquidity_at(const LiquidityModel& model, double t);

/// Discrete reading of the liquidity constraint: the cumulative traded
/// notional over the horizon must not exceed omega_max (inclusive).
bool liquidity_constraint_satisfied(std::span<const double> traded_notionals,
                                    double omega_max);

struct CounterpartyParams {
  double r_d = 0.0;  // expected protocol return
  double psi = 0.0;  // counterparty risk premium
  double r_f = 0.0;  // outside return
};

// Strict: r_d - psi > r_f.
bool participation_ok(const CounterpartyParams& p);

struct LiquidationDay {
  int day = 0;
  double collateral_price = 0.0;
  double reserve_price = 0.0;
  double units_sold = 0.0;
  double proceeds = 0.0;
  double debt_remaining = 0.0;
  double collateral_remaining = 0.0;
  double margin = 0.0;
};

struct LiquidationTrace {
  std::vector<LiquidationDay> days;
  std::optional<int> first_negative_day;

  double terminal_margin() const { return days.empty() ? 0.0 : days.back().margin; }
};

struct LiquidationOutcome {
  std::optional<int> first_negative_day;
  double terminal_margin = 0.0;
  double debt_remaining = 0.0;
};

/// Daily fire sale of a single collateral asset into decaying liquidity.
///
/// On day t the protocol sells u_t = min(L(t), collateral left, debt left / P(t))
/// at the day's price with no price impact, burns the proceeds against debt,
/// then records the scenario margin
///     collateral_left * P(t) + reserve * P_reserve(t) - debt_left
/// (lambda = 0, i.e. plain undercollateralization). The trace ends on the day
/// the debt reaches zero or at the end of the paths.
///
/// Requires exactly one collateral position; paths must be non-empty and of
/// equal length (HorizonMismatch otherwise).
LiquidationTrace run_liquidation(const ProtocolState& initial,
                                 std::span<const double> collateral_path,
                                 std::span<const double> reserve_path,
                                 const LiquidityModel& liquidity);

/// Same engine as run_liquidation without materialising the trace.
LiquidationOutcome liquidation_outcome(const ProtocolState& initial,
                                       std::span<const double> collateral_path,
                                       std::span<const double> reserve_path,
                                       const LiquidityModel& liquidity);

}  // namespace defistress
