#include "defistress/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "defistress/csv.hpp"
#include "defistress/error.hpp"

namespace defistress {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::Schema, what); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
  }
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where + " must be an object");
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) schema_error(where + ": unknown key '" + key + "'");
  }
}

void check_schema(const json& j, std::string_view expected) {
  require_object(j, "document");
  const auto it = j.find("schema");
  if (it == j.end() || !it->is_string())
    schema_error("missing 'schema' (expected \"" + std::string(expected) + "\")");
  if (it->get<std::string>() != expected)
    schema_error("unsupported schema '" + it->get<std::string>() + "' (expected \"" +
                 std::string(expected) + "\")");
}

const json& member(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) schema_error(where + ": missing '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(where + " must be finite");
  return v;
}

double number_at(const json& j, const char* key, const std::string& where) {
  return number(member(j, key, where), where + "." + key);
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number_at(j, key, where) : fallback;
}

std::uint64_t unsigned_at(const json& j, const char* key, const std::string& where) {
  const auto& v = member(j, key, where);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    schema_error(where + "." + key + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string_at(const json& j, const char* key, const std::string& where) {
  const auto& v = member(j, key, where);
  if (!v.is_string()) schema_error(where + "." + key + " must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where + " must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

GbmParams gbm(const json& j, const std::string& where) {
  require_object(j, where);
  check_keys(j, {"p0", "mu", "sigma"}, where);
  GbmParams p{number_at(j, "p0", where), number_at(j, "mu", where), number_at(j, "sigma", where)};
  if (!(p.p0 > 0)) schema_error(where + ".p0 must be positive");
  if (!(p.sigma >= 0)) schema_error(where + ".sigma must be non-negative");
  return p;
}

void check_correlation(double rho, const std::string& where) {
  if (!(rho >= -1.0 && rho <= 1.0))
    schema_error(where + " = " + csv::number(rho) + " is out of range [-1, 1]");
}

std::vector<OrderBookSnapshot> books(const json& j) {
  if (!j.is_array()) schema_error("books must be an array");
  std::vector<OrderBookSnapshot> out;
  for (std::size_t b = 0; b < j.size(); ++b) {
    const std::string where = "books[" + std::to_string(b) + "]";
    require_object(j[b], where);
    check_keys(j[b], {"venue", "levels"}, where);
    OrderBookSnapshot book;
    book.venue_id = string_at(j[b], "venue", where);
    const auto& levels = member(j[b], "levels", where);
    if (!levels.is_array()) schema_error(where + ".levels must be an array");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const std::string lw = where + ".levels[" + std::to_string(i) + "]";
      if (!levels[i].is_array() || levels[i].size() != 2) schema_error(lw + " must be [price, qty]");
      book.levels.push_back({number(levels[i][0], lw), number(levels[i][1], lw)});
    }
    try {
      book.validate();
    } catch (const Error& e) {
      schema_error(e.what());
    }
    out.push_back(std::move(book));
  }
  return out;
}

}  // namespace

StressJob parse_stress_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  check_schema(j, kStressSchema);
  check_keys(j,
             {"schema", "seed", "horizon_days", "n_paths", "rho_corr", "collateral", "reserve",
              "reserve_quantity", "collateral_ratio", "debt_levels", "liquidity_regimes",
              "heatmap", "correlation_sweep", "description"},
             "stress config");
  const std::string w = "stress config";

  StressJob job;
  auto& s = job.scenario;
  s.seed = unsigned_at(j, "seed", w);
  const auto horizon = unsigned_at(j, "horizon_days", w);
  if (horizon < 1 || horizon > 100'000) schema_error("horizon_days must lie in [1, 100000]");
  s.horizon_days = static_cast<int>(horizon);
  s.n_paths = unsigned_at(j, "n_paths", w);
  if (s.n_paths < 1 || s.n_paths > std::numeric_limits<std::uint32_t>::max())
    schema_error("n_paths must lie in [1, 2^32 - 1]");
  s.rho_corr = number_at(j, "rho_corr", w);
  check_correlation(s.rho_corr, "rho_corr");
  s.collateral = gbm(member(j, "collateral", w), "collateral");
  s.reserve = gbm(member(j, "reserve", w), "reserve");
  s.reserve_quantity = number_or(j, "reserve_quantity", s.reserve_quantity, w);
  if (!(s.reserve_quantity >= 0)) schema_error("reserve_quantity must be non-negative");
  s.collateral_ratio = number_or(j, "collateral_ratio", s.collateral_ratio, w);
  if (!(s.collateral_ratio > 0)) schema_error("collateral_ratio must be positive");

  s.debt_levels = numbers(member(j, "debt_levels", w), "debt_levels");
  if (s.debt_levels.empty()) schema_error("debt_levels must be non-empty");
  for (double d : s.debt_levels)
    if (!(d > 0)) schema_error("debt_levels must be positive");

  const auto& regimes = member(j, "liquidity_regimes", w);
  if (!regimes.is_array() || regimes.empty())
    schema_error("liquidity_regimes must be a non-empty array");
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    const std::string rw = "liquidity_regimes[" + std::to_string(i) + "]";
    require_object(regimes[i], rw);
    check_keys(regimes[i], {"label", "l0", "rho"}, rw);
    LiquidityRegime r;
    r.label = regimes[i].contains("label") ? string_at(regimes[i], "label", rw)
                                           : "regime" + std::to_string(i);
    r.model = {number_at(regimes[i], "l0", rw), number_at(regimes[i], "rho", rw)};
    if (!(r.model.l0 >= 0) || !(r.model.rho >= 0)) schema_error(rw + ": l0 and rho must be >= 0");
    s.liquidity_regimes.push_back(std::move(r));
  }

  if (j.contains("heatmap")) {
    const auto& h = j["heatmap"];
    require_object(h, "heatmap");
    check_keys(h, {"debt_grid", "l0_grid", "rho"}, "heatmap");
    HeatmapSpec spec;
    spec.debt_grid = numbers(member(h, "debt_grid", "heatmap"), "heatmap.debt_grid");
    spec.l0_grid = numbers(member(h, "l0_grid", "heatmap"), "heatmap.l0_grid");
    spec.liquidity_decay = number_or(h, "rho", spec.liquidity_decay, "heatmap");
    if (spec.debt_grid.empty() || spec.l0_grid.empty()) schema_error("heatmap grids must be non-empty");
    for (double d : spec.debt_grid)
      if (!(d > 0)) schema_error("heatmap.debt_grid must be positive");
    for (double l : spec.l0_grid)
      if (!(l >= 0)) schema_error("heatmap.l0_grid must be non-negative");
    if (!(spec.liquidity_decay >= 0)) schema_error("heatmap.rho must be non-negative");
    job.heatmap = std::move(spec);
  }
  if (j.contains("correlation_sweep")) {
    job.correlation_sweep = numbers(j["correlation_sweep"], "correlation_sweep");
    for (double r : job.correlation_sweep) check_correlation(r, "correlation_sweep entry");
  }
  return job;
}

AttackJob parse_attack_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  check_schema(j, kAttackSchema);
  const std::string w = "attack plan";
  check_keys(j,
             {"schema", "tokens_needed", "books", "flash_pools", "seizable_collateral",
              "mintable_debt", "governance_token_price", "loan_currency_price", "gas_cost",
              "strategies", "voting", "description"},
             w);
  AttackJob job;
  auto& p = job.plan;
  p.tokens_needed = number_at(j, "tokens_needed", w);
  if (!(p.tokens_needed > 0)) schema_error("tokens_needed must be positive");
  p.books = books(member(j, "books", w));
  const auto& pools = member(j, "flash_pools", w);
  if (!pools.is_array()) schema_error("flash_pools must be an array");
  for (std::size_t i = 0; i < pools.size(); ++i) {
    const std::string pw = "flash_pools[" + std::to_string(i) + "]";
    require_object(pools[i], pw);
    check_keys(pools[i], {"pool", "available", "fee_rate"}, pw);
    FlashPool fp{string_at(pools[i], "pool", pw), number_at(pools[i], "available", pw),
                 number_at(pools[i], "fee_rate", pw)};
    if (!(fp.available >= 0) || !(fp.fee_rate >= 0))
      schema_error(pw + ": available and fee_rate must be >= 0");
    p.flash_pools.push_back(std::move(fp));
  }
  p.seizable_collateral = number_at(j, "seizable_collateral", w);
  p.mintable_debt = number_at(j, "mintable_debt", w);
  p.governance_token_price = number_at(j, "governance_token_price", w);
  p.loan_currency_price = number_at(j, "loan_currency_price", w);
  if (!(p.seizable_collateral >= 0) || !(p.mintable_debt >= 0) ||
      !(p.governance_token_price >= 0) || !(p.loan_currency_price >= 0))
    schema_error("collateral, debt and prices must be non-negative");

  const auto& gas = member(j, "gas_cost", w);
  if (gas.is_number()) {
    job.gas.crowdfund = job.gas.flashloan = number(gas, "gas_cost");
  } else {
    require_object(gas, "gas_cost");
    check_keys(gas, {"crowdfund", "flashloan"}, "gas_cost");
    job.gas.crowdfund = number_at(gas, "crowdfund", "gas_cost");
    job.gas.flashloan = number_at(gas, "flashloan", "gas_cost");
  }
  if (!(job.gas.crowdfund >= 0) || !(job.gas.flashloan >= 0))
    schema_error("gas_cost must be non-negative");

  if (j.contains("strategies")) {
    const auto& s = j["strategies"];
    if (!s.is_array()) schema_error("strategies must be an array");
    for (const auto& name : s) {
      if (name == "crowdfund") {
        job.strategies.push_back(AttackStrategy::Crowdfund);
      } else if (name == "flashloan") {
        job.strategies.push_back(AttackStrategy::FlashLoan);
      } else {
        schema_error("unknown strategy " + name.dump());
      }
    }
  } else {
    job.strategies = {AttackStrategy::FlashLoan, AttackStrategy::Crowdfund};
  }

  if (j.contains("voting")) {
    const auto& v = j["voting"];
    require_object(v, "voting");
    check_keys(v, {"gas_limit", "per_vote", "block_fraction"}, "voting");
    VotingSpec spec{unsigned_at(v, "gas_limit", "voting"), unsigned_at(v, "per_vote", "voting"),
                    number_or(v, "block_fraction", 1.0, "voting")};
    if (spec.gas_limit == 0 || spec.per_vote == 0) schema_error("voting gas values must be positive");
    if (!(spec.block_fraction > 0 && spec.block_fraction <= 1))
      schema_error("voting.block_fraction must lie in (0, 1]");
    job.voting = spec;
  }
  return job;
}

SweepJob parse_sweep_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  require_object(j, "document");
  if (j.value("schema", std::string{}) == kAttackSchema) {
    auto attack = parse_attack_config(json_text);
    return {std::move(attack.plan.books), attack.plan.tokens_needed};
  }
  check_schema(j, kSweepSchema);
  check_keys(j, {"schema", "target_qty", "books", "description"}, "sweep config");
  SweepJob job;
  job.target_qty = number_at(j, "target_qty", "sweep config");
  if (!(job.target_qty > 0)) schema_error("target_qty must be positive");
  job.books = books(member(j, "books", "sweep config"));
  return job;
}

ContagionJob parse_contagion_config(std::string_view json_text,
                                    const std::filesystem::path& base_dir) {
  const json j = parse_json(json_text);
  check_schema(j, kContagionSchema);
  const std::string w = "contagion config";
  check_keys(j,
             {"schema", "seed", "n_protocols", "total_debt", "n_samples", "lambda_ranges",
              "snapshot", "holdings_cap", "damage_table", "description"},
             w);
  ContagionJob job;
  auto& m = job.model;
  m.seed = unsigned_at(j, "seed", w);
  m.n_protocols = unsigned_at(j, "n_protocols", w);
  if (m.n_protocols < 1) schema_error("n_protocols must be >= 1");
  m.total_debt = number_at(j, "total_debt", w);
  if (!(m.total_debt > 0)) schema_error("total_debt must be positive");
  m.n_samples = j.contains("n_samples") ? unsigned_at(j, "n_samples", w) : m.n_samples;
  if (m.n_samples < 1 || m.n_samples > std::numeric_limits<std::uint32_t>::max())
    schema_error("n_samples must lie in [1, 2^32 - 1]");

  const auto& ranges = member(j, "lambda_ranges", w);
  if (!ranges.is_array() || ranges.empty()) schema_error("lambda_ranges must be a non-empty array");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const std::string rw = "lambda_ranges[" + std::to_string(i) + "]";
    require_object(ranges[i], rw);
    check_keys(ranges[i], {"label", "low", "high"}, rw);
    LambdaRange r{ranges[i].contains("label") ? string_at(ranges[i], "label", rw)
                                              : "range" + std::to_string(i),
                  number_at(ranges[i], "low", rw), number_at(ranges[i], "high", rw)};
    if (!(r.low > 1.0) || !(r.high >= r.low)) schema_error(rw + ": need 1 < low <= high");
    job.ranges.push_back(std::move(r));
  }
  if (j.contains("snapshot")) {
    std::filesystem::path p = string_at(j, "snapshot", w);
    job.snapshot = p.is_absolute() ? p : base_dir / p;
  }
  if (j.contains("holdings_cap")) {
    job.holdings_cap = number_at(j, "holdings_cap", w);
    if (!(*job.holdings_cap >= 0)) schema_error("holdings_cap must be non-negative");
  }
  if (j.contains("damage_table")) {
    if (!j["damage_table"].is_boolean()) schema_error("damage_table must be a boolean");
    job.damage_table = j["damage_table"].get<bool>();
  }
  return job;
}

MarketSnapshot parse_snapshot_csv(std::string_view text) {
  const auto lines = csv::lines(text);
  if (lines.empty()) throw ParseError(0, "empty snapshot");
  const auto header = csv::split(lines.front());
  if (header != std::vector<std::string>{"market", "pair", "notional_usd"})
    throw ParseError(0, "expected header market,pair,notional_usd");
  MarketSnapshot snap;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv::split(lines[i]);
    if (f.size() != 3) throw ParseError(i, "expected 3 fields");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), v);
    if (ec != std::errc{} || ptr != f[2].data() + f[2].size() || !(v >= 0) || !std::isfinite(v))
      throw ParseError(i, "malformed notional '" + f[2] + "'");
    snap.entries.push_back({f[0], f[1], v});
  }
  return snap;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace defistress
