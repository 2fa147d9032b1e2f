#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "defistress/market_data.hpp"
#include "defistress/report.hpp"

// End-to-end commands behind the CLI subcommands. Each reads its inputs,
// runs the models and writes outputs; failures surface as defistress::Error.
namespace defistress {

struct CommandOptions {
  std::optional<std::uint64_t> seed_override;
  unsigned threads = 1;
  std::function<void(std::string_view)> log;  // progress lines, may be empty
};

struct IngestResult {
  ReturnStats stats;
  std::optional<JarqueBera> jarque_bera;  // absent for < 4 returns or zero variance
};

/// Writes the stats JSON to out_json unless it is empty.
IngestResult run_ingest(const std::filesystem::path& csv_path,
                        const std::filesystem::path& out_json);

/// Per-cell traces, summary.json, heatmap.csv (when configured), optional
/// correlation sweep and manifest.json.
RunManifest run_stress(const std::filesystem::path& config_path,
                       const std::filesystem::path& out_dir, const CommandOptions& options);

/// heatmap.csv and manifest.json only; the config must have a heatmap section.
RunManifest run_heatmap(const std::filesystem::path& config_path,
                        const std::filesystem::path& out_dir, const CommandOptions& options);

/// Returns the sweep JSON; also written to out_json unless it is empty.
std::string run_sweep(const std::filesystem::path& config_path,
                      const std::filesystem::path& out_json);

/// Returns the attack report JSON; also written to out_json unless empty.
std::string run_attack(const std::filesystem::path& plan_path,
                       const std::filesystem::path& out_json);

/// Loss CSVs per lambda range, contagion_summary.json, optional damage table,
/// manifest.json.
RunManifest run_contagion(const std::filesystem::path& config_path,
                          const std::filesystem::path& out_dir, const CommandOptions& options);

}  // namespace defistress
