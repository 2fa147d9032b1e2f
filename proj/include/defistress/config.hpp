#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "defistress/attack.hpp"
#include "defistress/contagion.hpp"
#include "defistress/stress.hpp"

// JSON/CSV inputs for the command layer. Every document carries a `schema`
// string; unknown keys and out-of-range values raise Error(Schema), malformed
// JSON raises Error(Parse).
namespace defistress {

inline constexpr std::string_view kStressSchema = "defistress.stress/v1";
inline constexpr std::string_view kAttackSchema = "defistress.attack/v1";
inline constexpr std::string_view kSweepSchema = "defistress.sweep/v1";
inline constexpr std::string_view kContagionSchema = "defistress.contagion/v1";

struct HeatmapSpec {
  std::vector<double> debt_grid;
  std::vector<double> l0_grid;
  double liquidity_decay = 0.01;
};

struct StressJob {
  ScenarioConfig scenario;
  std::optional<HeatmapSpec> heatmap;
  std::vector<double> correlation_sweep;
};

StressJob parse_stress_config(std::string_view json_text);

struct GasCosts {
  double crowdfund = 0.0;
  double flashloan = 0.0;
};

struct VotingSpec {
  std::uint64_t gas_limit = 0;
  std::uint64_t per_vote = 0;
  double block_fraction = 1.0;
};

struct AttackJob {
  AttackPlan plan;  // plan.gas_cost is unused; see gas
  GasCosts gas;
  std::vector<AttackStrategy> strategies;
  std::optional<VotingSpec> voting;
};

AttackJob parse_attack_config(std::string_view json_text);

struct SweepJob {
  std::vector<OrderBookSnapshot> books;
  double target_qty = 0.0;
};

// Accepts a sweep document or an attack plan (target = tokens_needed).
SweepJob parse_sweep_config(std::string_view json_text);

struct LambdaRange {
  std::string label;
  double low = 0.0;
  double high = 0.0;
};

struct ContagionJob {
  CompositionModel model;  // lambda bounds are taken from each range
  std::vector<LambdaRange> ranges;
  std::optional<std::filesystem::path> snapshot;  // resolved against the config's directory
  std::optional<double> holdings_cap;
  bool damage_table = false;
};

ContagionJob parse_contagion_config(std::string_view json_text,
                                    const std::filesystem::path& base_dir = {});

/// `market,pair,notional_usd` with a header row.
MarketSnapshot parse_snapshot_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace defistress
