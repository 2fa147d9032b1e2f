#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace defistress {

struct BookLevel {
  double price = 0.0;     // quote per unit
  double quantity = 0.0;  // units
};

// Ask side of one venue, ascending by price.
struct OrderBookSnapshot {
  std::string venue_id;
  std::vector<BookLevel> levels;

  void validate() const;
};

struct VenueFill {
  std::string venue_id;
  double quantity = 0.0;
  double cost = 0.0;
};

struct SweepResult {
  double total_cost = 0.0;
  double quantity = 0.0;
  std::vector<VenueFill> fills;  // one entry per input book, in input order
};

/// Buys target_qty from the merged ladder of all venues, cheapest level first
/// (ties keep input order). Throws InsufficientDepthError when the combined
/// depth is short of the target.
SweepResult sweep_cost(std::span<const OrderBookSnapshot> books, double target_qty);

/// target_qty at the best ask across venues, ignoring depth.
double naive_cost(std::span<const OrderBookSnapshot> books, double target_qty);

struct FlashPool {
  std::string pool_id;
  double available = 0.0;  // loan-currency units
  double fee_rate = 0.0;   // fraction of the borrowed amount
};

struct PoolAllocation {
  std::string pool_id;
  double amount = 0.0;
  double interest = 0.0;
};

struct FlashLoanQuote {
  std::vector<PoolAllocation> allocations;  // only pools actually drawn, cheapest first
  double total_interest = 0.0;
};

/// Greedy fill from the lowest-fee pools (ties keep input order).
FlashLoanQuote flash_loan_cost(std::span<const FlashPool> pools, double amount);

/// floor(gas_limit * block_fraction / per_vote).
std::uint64_t voting_gas_budget(std::uint64_t gas_limit, std::uint64_t per_vote,
                                double block_fraction);

enum class AttackStrategy { Crowdfund, FlashLoan };

const char* to_string(AttackStrategy s) noexcept;

struct AttackPlan {
  double tokens_needed = 0.0;  // governance tokens for a voting majority
  std::vector<OrderBookSnapshot> books;
  std::vector<FlashPool> flash_pools;
  double seizable_collateral = 0.0;  // loan-currency units
  double mintable_debt = 0.0;        // quote currency
  double governance_token_price = 0.0;
  double loan_currency_price = 0.0;
  double gas_cost = 0.0;  // quote currency

  void validate() const;
};

struct Holdings {
  double loan_currency = 0.0;
  double governance_tokens = 0.0;
  double debt_tokens = 0.0;  // valued 1:1 in quote currency
};

struct AttackReport {
  AttackStrategy strategy = AttackStrategy::Crowdfund;
  bool executed = false;
  double net_profit = 0.0;  // quote currency; -gas when reverted
  Holdings holdings;        // zero when reverted
  std::optional<SweepResult> sweep;
  std::optional<FlashLoanQuote> loan;
  double naive_cost = 0.0;
};

/// Crowdfund: participants already hold the tokens and keep them, so
/// profit = seized collateral value + minted debt - gas.
/// Flash loan: borrow the sweep cost, buy the tokens, seize, repay with
/// interest; profit = value(seized - repaid - interest) + minted debt +
/// value(tokens kept) - gas.
/// Either way the attack executes only when profit > 0; otherwise it reverts
/// and only gas is lost.
AttackReport attack_profit(const AttackPlan& plan, AttackStrategy strategy);

}  // namespace defistress
