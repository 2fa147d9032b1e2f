#include "defistress/commands.hpp"

#include <cmath>

#include <json.hpp>

#include "defistress/config.hpp"
#include "defistress/contagion.hpp"
#include "defistress/csv.hpp"
#include "defistress/error.hpp"

namespace defistress {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void log(const CommandOptions& o, const std::string& line) {
  if (o.log) o.log(line);
}

class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& relative, std::string_view content) {
    write_text_file(root_ / relative, content);
    files_.push_back(relative);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

RunManifest begin_manifest(const char* command, const std::string& config_bytes) {
  RunManifest m;
  m.command = command;
  m.tool_version = DEFISTRESS_VERSION;
  m.config_digest = "sha256:" + sha256_hex(config_bytes);
  m.started_at = utc_timestamp();
  return m;
}

void finish_manifest(RunManifest& m, OutputDir& out) {
  m.outputs = out.files();
  m.outputs.push_back("manifest.json");
  m.finished_at = utc_timestamp();
  out.write("manifest.json", manifest_json(m));
}

void write_report(OutputDir& out, const StressReport& report, const std::string& prefix) {
  const auto names = trace_file_names(report);
  for (std::size_t i = 0; i < report.cells.size(); ++i)
    out.write(prefix + names[i], trace_csv(report.cells[i].trace));
  std::vector<std::string> rel;
  for (const auto& n : names) rel.push_back(prefix + n);
  out.write(prefix + "summary.json", stress_summary_json(report, rel));
}

RunOptions run_options(const CommandOptions& o, const char* what) {
  RunOptions r;
  r.threads = o.threads;
  if (o.log) {
    r.progress = [&o, what](std::size_t done, std::size_t total) {
      o.log(std::string(what) + ": cell " + std::to_string(done) + "/" + std::to_string(total));
    };
  }
  return r;
}

StressJob load_stress_job(const std::string& bytes, const CommandOptions& options) {
  auto job = parse_stress_config(bytes);
  if (options.seed_override) job.scenario.seed = *options.seed_override;
  return job;
}

}  // namespace

IngestResult run_ingest(const fs::path& csv_path, const fs::path& out_json) {
  const auto series = load_series(csv_path);
  const auto returns = log_returns(series);
  IngestResult result;
  result.stats = estimate_stats(returns);
  try {
    result.jarque_bera = jarque_bera(returns);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientData && e.code() != ErrorCode::DegenerateSample) throw;
  }
  if (!out_json.empty())
    write_text_file(out_json, stats_json(result.stats,
                                         result.jarque_bera ? &*result.jarque_bera : nullptr));
  return result;
}

RunManifest run_stress(const fs::path& config_path, const fs::path& out_dir,
                       const CommandOptions& options) {
  const auto bytes = read_text_file(config_path);
  const auto job = load_stress_job(bytes, options);
  auto manifest = begin_manifest("stress", bytes);
  manifest.seed = job.scenario.seed;
  OutputDir out(out_dir);

  log(options, "stress: " + std::to_string(job.scenario.n_paths) + " paths x " +
                   std::to_string(job.scenario.horizon_days) + " days, seed " +
                   std::to_string(job.scenario.seed));
  const auto report = run_scenario(job.scenario, run_options(options, "stress"));
  write_report(out, report, "");

  if (job.heatmap) {
    const auto& h = *job.heatmap;
    const auto map = heatmap(job.scenario, h.debt_grid, h.l0_grid, h.liquidity_decay,
                             run_options(options, "heatmap"));
    out.write("heatmap.csv", heatmap_csv(map));
  }
  if (!job.correlation_sweep.empty()) {
    const auto sweep =
        correlation_sweep(job.scenario, job.correlation_sweep, run_options(options, "sweep"));
    for (const auto& [rho, report] : sweep)
      write_report(out, report, "sweep/rho_" + csv::number(rho) + "/");
    out.write("correlation_sweep.json", correlation_sweep_json(sweep));
  }
  finish_manifest(manifest, out);
  return manifest;
}

RunManifest run_heatmap(const fs::path& config_path, const fs::path& out_dir,
                        const CommandOptions& options) {
  const auto bytes = read_text_file(config_path);
  const auto job = load_stress_job(bytes, options);
  if (!job.heatmap) throw Error(ErrorCode::Schema, "config has no 'heatmap' section");
  auto manifest = begin_manifest("heatmap", bytes);
  manifest.seed = job.scenario.seed;
  OutputDir out(out_dir);
  const auto& h = *job.heatmap;
  const auto map = heatmap(job.scenario, h.debt_grid, h.l0_grid, h.liquidity_decay,
                           run_options(options, "heatmap"));
  out.write("heatmap.csv", heatmap_csv(map));
  finish_manifest(manifest, out);
  return manifest;
}

std::string run_sweep(const fs::path& config_path, const fs::path& out_json) {
  const auto job = parse_sweep_config(read_text_file(config_path));
  const auto sweep = sweep_cost(job.books, job.target_qty);
  const auto text = sweep_json(sweep, naive_cost(job.books, job.target_qty));
  if (!out_json.empty()) write_text_file(out_json, text);
  return text;
}

std::string run_attack(const fs::path& plan_path, const fs::path& out_json) {
  const auto job = parse_attack_config(read_text_file(plan_path));
  ordered_json j;
  j["schema"] = "defistress.attack-report/v1";
  ordered_json reports = ordered_json::array();
  for (auto strategy : job.strategies) {
    auto plan = job.plan;
    plan.gas_cost = strategy == AttackStrategy::Crowdfund ? job.gas.crowdfund : job.gas.flashloan;
    reports.push_back(ordered_json::parse(attack_report_json(attack_profit(plan, strategy))));
  }
  j["reports"] = std::move(reports);
  if (job.voting) {
    const auto& v = *job.voting;
    j["voting"] = {{"gas_limit", v.gas_limit},
                   {"per_vote", v.per_vote},
                   {"block_fraction", v.block_fraction},
                   {"votes_per_block", voting_gas_budget(v.gas_limit, v.per_vote, v.block_fraction)}};
  }
  const auto text = j.dump(2) + "\n";
  if (!out_json.empty()) write_text_file(out_json, text);
  return text;
}

RunManifest run_contagion(const fs::path& config_path, const fs::path& out_dir,
                          const CommandOptions& options) {
  const auto bytes = read_text_file(config_path);
  auto job = parse_contagion_config(bytes, config_path.parent_path());
  if (options.seed_override) job.model.seed = *options.seed_override;
  auto manifest = begin_manifest("contagion", bytes);
  manifest.seed = job.model.seed;
  OutputDir out(out_dir);

  ordered_json summary;
  summary["schema"] = "defistress.contagion-summary/v1";
  summary["n_protocols"] = job.model.n_protocols;
  summary["total_debt"] = job.model.total_debt;
  summary["n_samples"] = job.model.n_samples;
  summary["seed"] = job.model.seed;
  ordered_json ranges = ordered_json::array();
  for (const auto& r : job.ranges) {
    auto model = job.model;
    model.lambda_low = r.low;
    model.lambda_high = r.high;
    log(options, "contagion: sampling " + r.label);
    const auto losses = max_systemic_loss(model, options.threads);
    const std::string file = "losses_" + safe_file_stem(r.label) + ".csv";
    out.write(file, loss_csv(losses));
    const double expected = r.high > r.low
                                ? model.total_debt * std::log(r.high / r.low) / (r.high - r.low)
                                : model.total_debt / r.low;
    ranges.push_back({{"label", r.label},
                      {"low", r.low},
                      {"high", r.high},
                      {"mean", losses.mean},
                      {"min", losses.min},
                      {"max", losses.max},
                      {"expected_mean", expected},
                      {"samples_file", file}});
  }
  summary["ranges"] = std::move(ranges);

  if (job.snapshot) {
    const auto snap = parse_snapshot_csv(read_text_file(*job.snapshot));
    ordered_json s;
    s["markets"] = snap.entries.size();
    s["unlimited"] = sweepable_total(snap, std::nullopt);
    if (job.holdings_cap) {
      s["holdings_cap"] = *job.holdings_cap;
      s["capped"] = sweepable_total(snap, job.holdings_cap);
    }
    summary["liquidity_sweep"] = std::move(s);
  }
  if (job.damage_table) {
    const auto rows = reported_damage_rows();
    out.write("damage_table.csv", damage_table_csv(rows));
  }
  out.write("contagion_summary.json", summary.dump(2) + "\n");
  finish_manifest(manifest, out);
  return manifest;
}

}  // namespace defistress
