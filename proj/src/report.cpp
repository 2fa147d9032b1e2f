#include "defistress/report.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>

#include <json.hpp>
#include <openssl/evp.h>

#include "defistress/csv.hpp"
#include "defistress/error.hpp"

namespace defistress {

using nlohmann::ordered_json;

namespace {

ordered_json optional_day(const std::optional<int>& day) {
  return day ? ordered_json(*day) : ordered_json(nullptr);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string safe_file_stem(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? "cell" : out;
}

namespace {

std::string debt_tag(double debt) {
  const double millions = debt / 1e6;
  if (millions == std::floor(millions) && millions >= 1) return csv::number(millions) + "m";
  return csv::number(debt);
}

}  // namespace

std::string stats_json(const ReturnStats& stats, const JarqueBera* jb) {
  ordered_json j;
  j["mu"] = stats.mu;
  j["sigma"] = stats.sigma;
  j["n"] = stats.n;
  if (jb) j["jarque_bera"] = {{"statistic", jb->statistic}, {"p_value", jb->p_value}};
  return dump(j);
}

std::string trace_csv(const LiquidationTrace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& d : trace.days) {
    out += std::to_string(d.day);
    for (double v : {d.collateral_price, d.reserve_price, d.units_sold, d.proceeds, d.debt_remaining,
                     d.collateral_remaining, d.margin}) {
      out += ',';
      out += csv::number(v);
    }
    out += '\n';
  }
  return out;
}

std::string ensemble_csv(const PathEnsemble& e) {
  std::string out = "path,day,collateral_price,reserve_price\n";
  for (std::size_t k = 0; k < e.n_paths; ++k) {
    for (std::size_t t = 0; t < e.collateral.cols(); ++t) {
      out += std::to_string(k) + ',' + std::to_string(t) + ',' + csv::number(e.collateral(k, t)) +
             ',' + csv::number(e.reserve(k, t)) + '\n';
    }
  }
  return out;
}

std::vector<std::string> trace_file_names(const StressReport& report) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (const auto& cell : report.cells) {
    const std::string stem = "trace_debt" + debt_tag(cell.debt) + "_" + safe_file_stem(cell.regime.label);
    std::string name = stem + ".csv";
    for (int n = 2; used.count(name); ++n) name = stem + "_" + std::to_string(n) + ".csv";
    used.insert(name);
    names.push_back(std::move(name));
  }
  return names;
}

namespace {

ordered_json report_json(const StressReport& report, std::span<const std::string> trace_files) {
  ordered_json j;
  j["seed"] = report.seed;
  j["n_paths"] = report.n_paths;
  j["rho_corr"] = report.rho_corr;
  ordered_json cells = ordered_json::array();
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& c = report.cells[i];
    ordered_json cj;
    cj["debt"] = c.debt;
    cj["regime"] = c.regime.label;
    cj["l0"] = c.regime.model.l0;
    cj["rho"] = c.regime.model.rho;
    cj["path_index"] = c.path_index;
    cj["first_negative_day"] = optional_day(c.first_negative_day);
    cj["terminal_margin"] = c.terminal_margin;
    cj["min_terminal_margin"] = c.min_terminal_margin;
    if (i < trace_files.size()) cj["trace_file"] = trace_files[i];
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

}  // namespace

std::string stress_summary_json(const StressReport& report,
                                std::span<const std::string> trace_files) {
  ordered_json j;
  j["schema"] = "defistress.stress-summary/v1";
  const auto body = report_json(report, trace_files);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return dump(j);
}

std::string correlation_sweep_json(std::span<const std::pair<double, StressReport>> sweep) {
  ordered_json j;
  j["schema"] = "defistress.correlation-sweep/v1";
  ordered_json reports = ordered_json::array();
  for (const auto& [rho, report] : sweep) reports.push_back(report_json(report, {}));
  j["reports"] = std::move(reports);
  return dump(j);
}

std::string heatmap_csv(const Heatmap& map) {
  std::string out = "debt";
  for (double l0 : map.l0_grid) out += ',' + csv::number(l0);
  out += '\n';
  for (std::size_t i = 0; i < map.debt_grid.size(); ++i) {
    out += csv::number(map.debt_grid[i]);
    for (std::size_t k = 0; k < map.l0_grid.size(); ++k) {
      out += ',';
      if (const auto d = map.at(i, k)) out += std::to_string(*d);
    }
    out += '\n';
  }
  return out;
}

std::string loss_csv(const LossDistribution& losses) {
  std::string out = "sample,loss\n";
  for (std::size_t s = 0; s < losses.samples.size(); ++s)
    out += std::to_string(s) + ',' + csv::number(losses.samples[s]) + '\n';
  return out;
}

namespace {

ordered_json sweep_object(const SweepResult& sweep, double naive) {
  ordered_json j;
  j["quantity"] = sweep.quantity;
  j["total_cost"] = sweep.total_cost;
  j["naive_cost"] = naive;
  j["ratio_to_naive"] = naive > 0 ? sweep.total_cost / naive : 0.0;
  ordered_json fills = ordered_json::array();
  for (const auto& f : sweep.fills)
    fills.push_back({{"venue", f.venue_id}, {"quantity", f.quantity}, {"cost", f.cost}});
  j["fills"] = std::move(fills);
  return j;
}

}  // namespace

std::string sweep_json(const SweepResult& sweep, double naive) {
  return dump(sweep_object(sweep, naive));
}

std::string attack_report_json(const AttackReport& r) {
  ordered_json j;
  j["strategy"] = to_string(r.strategy);
  j["executed"] = r.executed;
  j["net_profit_usd"] = r.net_profit;
  j["holdings"] = {{"loan_currency", r.holdings.loan_currency},
                   {"governance_tokens", r.holdings.governance_tokens},
                   {"debt_tokens", r.holdings.debt_tokens}};
  if (r.sweep) j["sweep"] = sweep_object(*r.sweep, r.naive_cost);
  if (r.loan) {
    ordered_json alloc = ordered_json::array();
    for (const auto& a : r.loan->allocations)
      alloc.push_back({{"pool", a.pool_id}, {"amount", a.amount}, {"interest", a.interest}});
    j["flash_loan"] = {{"allocations", std::move(alloc)}, {"total_interest", r.loan->total_interest}};
  }
  return dump(j);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::Io, "sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string manifest_json(const RunManifest& m) {
  ordered_json j;
  j["schema"] = "defistress.manifest/v1";
  j["tool"] = "defistress";
  j["version"] = m.tool_version;
  j["command"] = m.command;
  j["config_digest"] = m.config_digest;
  j["seed"] = m.seed;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  auto outputs = m.outputs;
  std::sort(outputs.begin(), outputs.end());
  j["outputs"] = outputs;
  return dump(j);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace defistress
