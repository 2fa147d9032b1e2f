#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace defistress {

struct MarketEntry {
  std::string market_id;
  std::string pair;
  double available_notional = 0.0;  // quote currency
};

struct MarketSnapshot {
  std::vector<MarketEntry> entries;
};

/// Total liquidity an agent can soak up with a failing debt asset. An unset
/// cap models unlimited minting (governance capture); a finite cap models an
/// agent limited to its existing holdings (price crash).
double sweepable_total(const MarketSnapshot& snapshot, std::optional<double> holdings_cap);

// lambda here is the full collateralization multiplier (1.5 means 150%), not
// the overcollateralization factor used by the protocol model.
struct CompositionModel {
  std::size_t n_protocols = 30;
  double total_debt = 0.0;
  double lambda_low = 1.01;
  double lambda_high = 1.05;
  std::uint64_t seed = 0;
  std::size_t n_samples = 100'000;

  void validate() const;
};

struct LossDistribution {
  std::vector<double> samples;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Per sample, lambda_p ~ U(low, high) i.i.d. for each of N protocols and
/// loss = sum_p (D / N) / lambda_p. Sample s draws from substream (seed, s),
/// so results are identical for any thread count.
LossDistribution max_systemic_loss(const CompositionModel& model, unsigned threads = 1);

/// The loss for one explicit set of multipliers.
double systemic_loss(double total_debt, std::span<const double> lambdas);

struct DamageRow {
  std::string label;
  double loss = 0.0;
  bool lower_bound = false;  // reported as "N+" in the source table

  bool operator==(const DamageRow&) const = default;
};

/// Rows of the initial-failure damage table as reported for MakerDAO.
std::vector<DamageRow> reported_damage_rows();

/// CSV with header `label,loss_usd,lower_bound`.
std::string damage_table_csv(std::span<const DamageRow> rows);
std::vector<DamageRow> parse_damage_table_csv(std::string_view text);

}  // namespace defistress
