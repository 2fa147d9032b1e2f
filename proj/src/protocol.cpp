#include "defistress/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "defistress/error.hpp"

namespace defistress {

void ProtocolState::validate() const {
  if (!(debt >= 0)) throw Error(ErrorCode::InvalidParams, "debt must be non-negative");
  if (!(reserve_quantity >= 0))
    throw Error(ErrorCode::InvalidParams, "reserve quantity must be non-negative");
  for (const auto& p : positions) {
    if (!(p.quantity >= 0))
      throw Error(ErrorCode::InvalidParams, "position " + p.asset_id + ": negative quantity");
    if (!(p.lambda >= 0))
      throw Error(ErrorCode::InvalidParams, "position " + p.asset_id + ": negative lambda");
  }
}

double margin_basic(const ProtocolState& state, const PriceMap& prices) {
  double weighted = 0.0;
  for (const auto& p : state.positions) {
    const auto it = prices.find(p.asset_id);
    if (it == prices.end()) throw Error(ErrorCode::MissingPrice, "no price for " + p.asset_id);
    if (!(it->second > 0))
      throw Error(ErrorCode::InvalidParams, "price for " + p.asset_id + " must be positive");
    weighted += (1.0 + p.lambda) * it->second * p.quantity;
  }
  return weighted - state.debt;
}

double margin_with_reserve(const ProtocolState& state, const PriceMap& prices,
                           double reserve_price) {
  if (!(reserve_price > 0))
    throw Error(ErrorCode::InvalidParams, "reserve price must be positive");
  return margin_basic(state, prices) + reserve_price * state.reserve_quantity;
}

void LiquidityModel::validate() const {
  if (!(l0 >= 0)) throw Error(ErrorCode::InvalidParams, "l0 must be non-negative");
  if (!(rho >= 0)) throw Error(ErrorCode::InvalidParams, "liquidity decay must be non-negative");
}

double liquidity_at(const LiquidityModel& model, double t) {
  return model.l0 * std::exp(-model.rho * t);
}

bool liquidity_constraint_satisfied(std::span<const double> traded_notionals,
                                    double omega_max) {
  double total = 0.0;
  for (double omega : traded_notionals) total += omega;
  return total <= omega_max;
}

bool participation_ok(const CounterpartyParams& p) {
  // Differences within rounding of the inputs count as the boundary, which fails.
  const double scale = std::max({1.0, std::abs(p.r_d), std::abs(p.psi), std::abs(p.r_f)});
  return p.r_d - p.psi - p.r_f > 1e-12 * scale;
}

namespace {

template <class OnDay>
std::optional<int> liquidate(const ProtocolState& initial, std::span<const double> col,
                             std::span<const double> res, const LiquidityModel& liquidity,
                             OnDay&& on_day) {
  initial.validate();
  liquidity.validate();
  if (initial.positions.size() != 1)
    throw Error(ErrorCode::InvalidParams, "liquidation engine expects one collateral position");
  if (col.empty() || col.size() != res.size())
    throw Error(ErrorCode::HorizonMismatch, "collateral and reserve paths must cover the same horizon");

  double collateral = initial.positions.front().quantity;
  double debt = initial.debt;
  const double reserve = initial.reserve_quantity;
  std::optional<int> first_negative;

  for (std::size_t t = 0; t < col.size(); ++t) {
    const double price = col[t];
    if (!(price > 0) || !(res[t] > 0))
      throw Error(ErrorCode::InvalidParams, "path prices must be positive (day " + std::to_string(t) + ")");
    const double l_t = liquidity_at(liquidity, static_cast<double>(t));
    const double debt_units = debt / price;
    double sold = std::min({l_t, collateral, debt_units});
    double proceeds = sold * price;
    if (sold == debt_units) {
      debt = 0.0;
    } else {
      debt = std::max(0.0, debt - proceeds);
    }
    collateral = std::max(0.0, collateral - sold);

    LiquidationDay rec;
    rec.day = static_cast<int>(t);
    rec.collateral_price = price;
    rec.reserve_price = res[t];
    rec.units_sold = sold;
    rec.proceeds = proceeds;
    rec.debt_remaining = debt;
    rec.collateral_remaining = collateral;
    rec.margin = collateral * price + reserve * res[t] - debt;
    if (!std::isfinite(rec.margin))
      throw Error(ErrorCode::Numeric, "non-finite margin on day " + std::to_string(t));
    if (!first_negative && rec.margin < 0) first_negative = rec.day;
    on_day(rec);
    if (debt == 0.0) break;
  }
  return first_negative;
}

}  // namespace

LiquidationTrace run_liquidation(const ProtocolState& initial,
                                 std::span<const double> collateral_path,
                                 std::span<const double> reserve_path,
                                 const LiquidityModel& liquidity) {
  LiquidationTrace trace;
  trace.days.reserve(collateral_path.size());
  trace.first_negative_day =
      liquidate(initial, collateral_path, reserve_path, liquidity,
                [&](const LiquidationDay& d) { trace.days.push_back(d); });
  return trace;
}

LiquidationOutcome liquidation_outcome(const ProtocolState& initial,
                                       std::span<const double> collateral_path,
                                       std::span<const double> reserve_path,
                                       const LiquidityModel& liquidity) {
  LiquidationOutcome out;
  out.first_negative_day =
      liquidate(initial, collateral_path, reserve_path, liquidity, [&](const LiquidationDay& d) {
        out.terminal_margin = d.margin;
        out.debt_remaining = d.debt_remaining;
      });
  return out;
}

}  // namespace defistress
