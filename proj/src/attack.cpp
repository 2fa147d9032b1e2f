#include "defistress/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "defistress/error.hpp"

namespace defistress {

void OrderBookSnapshot::validate() const {
  double prev = 0.0;
  for (const auto& l : levels) {
    if (!(l.price > 0) || !std::isfinite(l.price))
      throw Error(ErrorCode::InvalidParams, venue_id + ": level prices must be positive");
    if (!(l.quantity > 0) || !std::isfinite(l.quantity))
      throw Error(ErrorCode::InvalidParams, venue_id + ": level quantities must be positive");
    if (l.price < prev)
      throw Error(ErrorCode::InvalidParams, venue_id + ": ask levels must be sorted ascending");
    prev = l.price;
  }
}

SweepResult sweep_cost(std::span<const OrderBookSnapshot> books, double target_qty) {
  if (!(target_qty > 0)) throw Error(ErrorCode::InvalidParams, "target quantity must be positive");

  struct Entry {
    double price;
    double quantity;
    std::size_t venue;
  };
  std::vector<Entry> ladder;
  double depth = 0.0;
  for (std::size_t v = 0; v < books.size(); ++v) {
    books[v].validate();
    for (const auto& l : books[v].levels) {
      ladder.push_back({l.price, l.quantity, v});
      depth += l.quantity;
    }
  }
  if (depth < target_qty) throw InsufficientDepthError(target_qty, depth);
  std::stable_sort(ladder.begin(), ladder.end(),
                   [](const Entry& a, const Entry& b) { return a.price < b.price; });

  SweepResult out;
  out.fills.reserve(books.size());
  for (const auto& b : books) out.fills.push_back({b.venue_id, 0.0, 0.0});
  double remaining = target_qty;
  for (const auto& e : ladder) {
    if (remaining <= 0) break;
    const double take = std::min(e.quantity, remaining);
    const double cost = take * e.price;
    out.total_cost += cost;
    out.quantity += take;
    out.fills[e.venue].quantity += take;
    out.fills[e.venue].cost += cost;
    remaining -= take;
  }
  return out;
}

double naive_cost(std::span<const OrderBookSnapshot> books, double target_qty) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : books) {
    b.validate();
    if (!b.levels.empty()) best = std::min(best, b.levels.front().price);
  }
  if (!std::isfinite(best)) throw InsufficientDepthError(target_qty, 0.0);
  return best * target_qty;
}

FlashLoanQuote flash_loan_cost(std::span<const FlashPool> pools, double amount) {
  if (!(amount > 0)) throw Error(ErrorCode::InvalidParams, "loan amount must be positive");
  std::vector<std::size_t> order(pools.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double available = 0.0;
  for (const auto& p : pools) {
    if (!(p.fee_rate >= 0)) throw Error(ErrorCode::InvalidParams, p.pool_id + ": negative fee rate");
    if (!(p.available >= 0))
      throw Error(ErrorCode::InvalidParams, p.pool_id + ": negative available liquidity");
    available += p.available;
  }
  if (available < amount)
    throw Error(ErrorCode::InsufficientPoolLiquidity,
                "flash pools hold " + std::to_string(available) + ", need " + std::to_string(amount));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pools[a].fee_rate < pools[b].fee_rate;
  });

  FlashLoanQuote quote;
  double remaining = amount;
  for (std::size_t i : order) {
    if (remaining <= 0) break;
    const auto& p = pools[i];
    const double take = std::min(p.available, remaining);
    if (take <= 0) continue;
    const double interest = take * p.fee_rate;
    quote.allocations.push_back({p.pool_id, take, interest});
    quote.total_interest += interest;
    remaining -= take;
  }
  return quote;
}

std::uint64_t voting_gas_budget(std::uint64_t gas_limit, std::uint64_t per_vote,
                                double block_fraction) {
  if (gas_limit == 0 || per_vote == 0)
    throw Error(ErrorCode::InvalidParams, "gas inputs must be positive");
  if (!(block_fraction > 0 && block_fraction <= 1))
    throw Error(ErrorCode::InvalidParams, "block fraction must lie in (0, 1]");
  const auto budget =
      static_cast<std::uint64_t>(std::floor(static_cast<double>(gas_limit) * block_fraction));
  return std::min(budget, gas_limit) / per_vote;
}

const char* to_string(AttackStrategy s) noexcept {
  return s == AttackStrategy::Crowdfund ? "crowdfund" : "flashloan";
}

void AttackPlan::validate() const {
  if (!(tokens_needed > 0)) throw Error(ErrorCode::InvalidParams, "tokens_needed must be positive");
  if (!(seizable_collateral >= 0) || !(mintable_debt >= 0))
    throw Error(ErrorCode::InvalidParams, "seizable collateral and mintable debt must be non-negative");
  if (!(governance_token_price >= 0) || !(loan_currency_price >= 0))
    throw Error(ErrorCode::InvalidParams, "prices must be non-negative");
  if (!(gas_cost >= 0)) throw Error(ErrorCode::InvalidParams, "gas cost must be non-negative");
}

AttackReport attack_profit(const AttackPlan& plan, AttackStrategy strategy) {
  plan.validate();
  AttackReport report;
  report.strategy = strategy;

  Holdings end;
  double value = 0.0;
  if (strategy == AttackStrategy::Crowdfund) {
    end.loan_currency = plan.seizable_collateral;
    end.governance_tokens = plan.tokens_needed;
    end.debt_tokens = plan.mintable_debt;
    // Tokens were already held before the attack and are kept after it.
    value = end.loan_currency * plan.loan_currency_price + end.debt_tokens;
  } else {
    report.sweep = sweep_cost(plan.books, plan.tokens_needed);
    report.naive_cost = naive_cost(plan.books, plan.tokens_needed);
    report.loan = flash_loan_cost(plan.flash_pools, report.sweep->total_cost);
    end.loan_currency =
        plan.seizable_collateral - report.sweep->total_cost - report.loan->total_interest;
    end.governance_tokens = plan.tokens_needed;
    end.debt_tokens = plan.mintable_debt;
    value = end.loan_currency * plan.loan_currency_price + end.debt_tokens +
            end.governance_tokens * plan.governance_token_price;
  }

  const double profit = value - plan.gas_cost;
  report.executed = profit > 0;
  if (report.executed) {
    report.net_profit = profit;
    report.holdings = end;
  } else {
    report.net_profit = -plan.gas_cost;
  }
  return report;
}

}  // namespace defistress
