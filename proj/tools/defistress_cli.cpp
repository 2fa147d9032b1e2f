// defi-stress: command-line front end over the C library.
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "defistress/defistress.h"

namespace {

std::shared_ptr<spdlog::logger> make_logger() {
  auto logger = spdlog::stderr_color_mt("defi-stress");
  logger->set_pattern("[%H:%M:%S] [%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DEFI_STRESS_LOG"); env && *env)
    logger->set_level(spdlog::level::from_str(env));
  return logger;
}

void log_line(const char* line, void* user) {
  static_cast<spdlog::logger*>(user)->info("{}", line);
}

int report(dfs_status status, const std::string& context) {
  if (status == DFS_OK) return 0;
  std::fprintf(stderr, "defi-stress: %s: %s\n", context.c_str(), dfs_last_error());
  return dfs_exit_code(status);
}

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c, bool out_required) {
  cmd->add_option("--config", c.config, "JSON config file")->required();
  auto* out = cmd->add_option("--out", c.out, "output directory or file");
  if (out_required) out->required();
  cmd->add_option("--seed", c.seed, "master seed, overrides the config");
  cmd->add_option("--threads", c.threads, "worker threads (outputs do not depend on it)")
      ->check(CLI::Range(1u, 1024u));
}

dfs_run_options run_options(const Common& c, spdlog::logger& logger) {
  dfs_run_options o{};
  o.has_seed_override = c.seed.has_value();
  o.seed_override = c.seed.value_or(0);
  o.threads = c.threads;
  o.log = &log_line;
  o.log_user = &logger;
  return o;
}

void print_and_free(char* text) {
  if (!text) return;
  std::fputs(text, stdout);
  dfs_string_free(text);
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = make_logger();

  CLI::App app{"Stress tests and attack-cost calculator for DeFi lending protocols"};
  app.set_version_flag("--version", std::string(dfs_version()));
  app.require_subcommand(1);

  std::string ingest_csv, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "estimate log-return stats from a daily OHLCV CSV");
  ingest->add_option("csv", ingest_csv, "CSV with date,open,high,low,close,volume")->required();
  ingest->add_option("--out", ingest_out, "stats JSON path (stdout when omitted)");

  Common stress_opts, heatmap_opts, sweep_opts, attack_opts, contagion_opts;
  auto* stress = app.add_subcommand("stress", "run the liquidation stress scenario grid");
  add_common(stress, stress_opts, true);
  auto* heat = app.add_subcommand("heatmap", "days-to-negative heatmap over debt x L0");
  add_common(heat, heatmap_opts, true);
  auto* sweep = app.add_subcommand("sweep-cost", "cost of sweeping order books for a target size");
  add_common(sweep, sweep_opts, false);
  auto* attack = app.add_subcommand("attack", "governance attack profit for both strategies");
  add_common(attack, attack_opts, false);
  auto* contagion = app.add_subcommand("contagion", "systemic loss distributions");
  add_common(contagion, contagion_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (ingest->parsed()) {
    dfs_return_stats stats{};
    const auto status =
        dfs_cmd_ingest(ingest_csv.c_str(), ingest_out.empty() ? nullptr : ingest_out.c_str(), &stats);
    if (status != DFS_OK) return report(status, ingest_csv);
    if (ingest_out.empty())
      std::printf("{\"mu\": %.17g, \"sigma\": %.17g, \"n\": %zu}\n", stats.mu, stats.sigma, stats.n);
    return 0;
  }
  if (stress->parsed()) {
    const auto o = run_options(stress_opts, *logger);
    return report(dfs_cmd_stress(stress_opts.config.c_str(), stress_opts.out.c_str(), &o),
                  stress_opts.config);
  }
  if (heat->parsed()) {
    const auto o = run_options(heatmap_opts, *logger);
    return report(dfs_cmd_heatmap(heatmap_opts.config.c_str(), heatmap_opts.out.c_str(), &o),
                  heatmap_opts.config);
  }
  if (sweep->parsed()) {
    char* text = nullptr;
    const auto status = dfs_cmd_sweep(sweep_opts.config.c_str(),
                                      sweep_opts.out.empty() ? nullptr : sweep_opts.out.c_str(),
                                      sweep_opts.out.empty() ? &text : nullptr);
    print_and_free(text);
    return report(status, sweep_opts.config);
  }
  if (attack->parsed()) {
    char* text = nullptr;
    const auto status = dfs_cmd_attack(attack_opts.config.c_str(),
                                       attack_opts.out.empty() ? nullptr : attack_opts.out.c_str(),
                                       attack_opts.out.empty() ? &text : nullptr);
    print_and_free(text);
    return report(status, attack_opts.config);
  }
  if (contagion->parsed()) {
    const auto o = run_options(contagion_opts, *logger);
    return report(
        dfs_cmd_contagion(contagion_opts.config.c_str(), contagion_opts.out.c_str(), &o),
        contagion_opts.config);
  }
  return 2;
}
