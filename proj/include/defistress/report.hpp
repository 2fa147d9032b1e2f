#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "defistress/attack.hpp"
#include "defistress/contagion.hpp"
#include "defistress/market_data.hpp"
#include "defistress/paths.hpp"
#include "defistress/protocol.hpp"
#include "defistress/stress.hpp"

// Serializers. All numbers use the shortest round-trip form, so equal inputs
// always produce equal bytes.
namespace defistress {

inline constexpr std::string_view kTraceHeader =
    "day,col_price,res_price,units_sold,proceeds,debt_remaining,collateral_remaining,margin";

std::string stats_json(const ReturnStats& stats, const JarqueBera* jb = nullptr);
std::string trace_csv(const LiquidationTrace& trace);
std::string ensemble_csv(const PathEnsemble& ensemble);

// File name used for a cell's trace, unique within a report.
std::vector<std::string> trace_file_names(const StressReport& report);
std::string stress_summary_json(const StressReport& report,
                                std::span<const std::string> trace_files);
std::string correlation_sweep_json(std::span<const std::pair<double, StressReport>> sweep);
// Rows = debt levels, columns = l0 values; cells without an event are empty.
std::string heatmap_csv(const Heatmap& map);

std::string loss_csv(const LossDistribution& losses);
std::string attack_report_json(const AttackReport& report);
std::string sweep_json(const SweepResult& sweep, double naive);

// Replaces anything outside [A-Za-z0-9._-] with '_'.
std::string safe_file_stem(std::string_view s);

std::string sha256_hex(std::string_view bytes);

struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string config_digest;  // "sha256:<hex>" of the raw config bytes
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;  // relative to the output directory, sorted
};

std::string manifest_json(const RunManifest& manifest);
std::string utc_timestamp();

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace defistress
