#include "defistress/defistress.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "defistress/attack.hpp"
#include "defistress/commands.hpp"
#include "defistress/config.hpp"
#include "defistress/contagion.hpp"
#include "defistress/error.hpp"
#include "defistress/market_data.hpp"
#include "defistress/paths.hpp"
#include "defistress/protocol.hpp"
#include "defistress/report.hpp"
#include "defistress/stress.hpp"

struct dfs_series {
  defistress::PriceSeries series;
};
struct dfs_ensemble {
  defistress::PathEnsemble ensemble;
};
struct dfs_trace {
  defistress::LiquidationTrace trace;
};
struct dfs_scenario {
  defistress::ScenarioConfig config;
};
struct dfs_report {
  defistress::StressReport report;
};

namespace {

using namespace defistress;

thread_local std::string g_last_error;

dfs_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return DFS_ERR_PARSE;
    case ErrorCode::EmptySeries: return DFS_ERR_EMPTY_SERIES;
    case ErrorCode::NonMonotonicTime: return DFS_ERR_NON_MONOTONIC_TIME;
    case ErrorCode::InsufficientData: return DFS_ERR_INSUFFICIENT_DATA;
    case ErrorCode::DegenerateSample: return DFS_ERR_DEGENERATE_SAMPLE;
    case ErrorCode::InvalidParams: return DFS_ERR_INVALID_PARAMS;
    case ErrorCode::MissingPrice: return DFS_ERR_MISSING_PRICE;
    case ErrorCode::HorizonMismatch: return DFS_ERR_HORIZON_MISMATCH;
    case ErrorCode::InsufficientDepth: return DFS_ERR_INSUFFICIENT_DEPTH;
    case ErrorCode::InsufficientPoolLiquidity: return DFS_ERR_INSUFFICIENT_POOL_LIQUIDITY;
    case ErrorCode::InvalidRange: return DFS_ERR_INVALID_RANGE;
    case ErrorCode::Io: return DFS_ERR_IO;
    case ErrorCode::Schema: return DFS_ERR_SCHEMA;
    case ErrorCode::Numeric: return DFS_ERR_NUMERIC;
  }
  return DFS_ERR_INTERNAL;
}

dfs_status fail(dfs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
dfs_status guarded(Body&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return DFS_OK;
  } catch (const Error& e) {
    return fail(status_for(e.code()), std::string(to_string(e.code())) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(DFS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DFS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DFS_ERR_INTERNAL, "unknown failure");
  }
}

dfs_status null_arg(const char* what) {
  return fail(DFS_ERR_INVALID_ARGUMENT, std::string("null argument: ") + what);
}

GbmParams to_gbm(const dfs_gbm_params& p) { return {p.p0, p.mu, p.sigma}; }

std::vector<OrderBookSnapshot> to_books(const dfs_book* books, std::size_t n) {
  std::vector<OrderBookSnapshot> out;
  out.reserve(n);
  for (std::size_t b = 0; b < n; ++b) {
    OrderBookSnapshot s;
    s.venue_id = books[b].venue ? books[b].venue : "venue" + std::to_string(b);
    if (books[b].n_levels > 0 && (!books[b].prices || !books[b].quantities))
      throw Error(ErrorCode::InvalidParams, "book " + s.venue_id + " has null level arrays");
    for (std::size_t i = 0; i < books[b].n_levels; ++i)
      s.levels.push_back({books[b].prices[i], books[b].quantities[i]});
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<FlashPool> to_pools(const dfs_flash_pool* pools, std::size_t n) {
  std::vector<FlashPool> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({pools[i].pool ? pools[i].pool : "pool" + std::to_string(i), pools[i].available,
                   pools[i].fee_rate});
  return out;
}

CommandOptions to_options(const dfs_run_options* o) {
  CommandOptions out;
  if (!o) return out;
  if (o->has_seed_override) out.seed_override = o->seed_override;
  out.threads = o->threads == 0 ? 1 : o->threads;
  if (o->log) {
    const auto fn = o->log;
    void* user = o->log_user;
    out.log = [fn, user](std::string_view line) { fn(std::string(line).c_str(), user); };
  }
  return out;
}

char* dup_string(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* dfs_version(void) { return DEFISTRESS_VERSION; }

const char* dfs_status_name(dfs_status status) {
  switch (status) {
    case DFS_OK: return "OK";
    case DFS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case DFS_ERR_PARSE: return "ParseError";
    case DFS_ERR_EMPTY_SERIES: return "EmptySeries";
    case DFS_ERR_NON_MONOTONIC_TIME: return "NonMonotonicTime";
    case DFS_ERR_INSUFFICIENT_DATA: return "InsufficientData";
    case DFS_ERR_DEGENERATE_SAMPLE: return "DegenerateSample";
    case DFS_ERR_INVALID_PARAMS: return "InvalidParams";
    case DFS_ERR_MISSING_PRICE: return "MissingPrice";
    case DFS_ERR_HORIZON_MISMATCH: return "HorizonMismatch";
    case DFS_ERR_INSUFFICIENT_DEPTH: return "InsufficientDepth";
    case DFS_ERR_INSUFFICIENT_POOL_LIQUIDITY: return "InsufficientPoolLiquidity";
    case DFS_ERR_INVALID_RANGE: return "InvalidRange";
    case DFS_ERR_IO: return "IoError";
    case DFS_ERR_SCHEMA: return "SchemaError";
    case DFS_ERR_NUMERIC: return "NumericError";
    case DFS_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* dfs_last_error(void) { return g_last_error.c_str(); }

int dfs_exit_code(dfs_status status) {
  switch (status) {
    case DFS_OK: return 0;
    case DFS_ERR_NUMERIC:
    case DFS_ERR_INTERNAL: return 3;
    default: return 2;
  }
}

void dfs_string_free(char* s) { std::free(s); }

/* market data */

dfs_status dfs_series_load(const char* path, dfs_series** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new dfs_series{load_series(path)}; });
}

dfs_status dfs_series_parse(const char* csv_text, size_t length, dfs_series** out) {
  if (!csv_text && length > 0) return null_arg("csv_text");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new dfs_series{parse_series_csv({csv_text, length})}; });
}

void dfs_series_free(dfs_series* series) { delete series; }

size_t dfs_series_size(const dfs_series* series) { return series ? series->series.size() : 0; }

dfs_status dfs_series_log_returns(const dfs_series* series, double* out, size_t capacity,
                                  size_t* written) {
  if (!series) return null_arg("series");
  if (!out && capacity > 0) return null_arg("out");
  return guarded([&] {
    const auto r = log_returns(series->series);
    const auto n = std::min(capacity, r.size());
    std::copy_n(r.begin(), n, out);
    if (written) *written = r.size();
  });
}

dfs_status dfs_estimate_stats(const double* returns, size_t n, dfs_return_stats* out) {
  if (!returns && n > 0) return null_arg("returns");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto s = estimate_stats({returns, n});
    *out = {s.mu, s.sigma, s.n};
  });
}

dfs_status dfs_jarque_bera_test(const double* returns, size_t n, dfs_jarque_bera* out) {
  if (!returns && n > 0) return null_arg("returns");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto jb = jarque_bera({returns, n});
    *out = {jb.statistic, jb.p_value};
  });
}

/* paths */

dfs_status dfs_simulate_gbm(const dfs_gbm_params* params, int horizon_days, size_t n_paths,
                            uint64_t seed, unsigned threads, double* out) {
  if (!params) return null_arg("params");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto m = simulate_gbm(to_gbm(*params), horizon_days, n_paths, seed, threads);
    std::copy(m.values().begin(), m.values().end(), out);
  });
}

dfs_status dfs_simulate_correlated(const dfs_gbm_params* collateral, const dfs_gbm_params* reserve,
                                   double rho, int horizon_days, size_t n_paths, uint64_t seed,
                                   unsigned threads, dfs_ensemble** out) {
  if (!collateral || !reserve) return null_arg("params");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new dfs_ensemble{simulate_correlated(to_gbm(*collateral), to_gbm(*reserve), rho,
                                                horizon_days, n_paths, seed, threads)};
  });
}

void dfs_ensemble_free(dfs_ensemble* ensemble) { delete ensemble; }

size_t dfs_ensemble_paths(const dfs_ensemble* e) { return e ? e->ensemble.n_paths : 0; }

size_t dfs_ensemble_days(const dfs_ensemble* e) { return e ? e->ensemble.collateral.cols() : 0; }

const double* dfs_ensemble_collateral(const dfs_ensemble* e) {
  return e ? e->ensemble.collateral.values().data() : nullptr;
}

const double* dfs_ensemble_reserve(const dfs_ensemble* e) {
  return e ? e->ensemble.reserve.values().data() : nullptr;
}

dfs_status dfs_ensemble_write_csv(const dfs_ensemble* e, const char* path) {
  if (!e) return null_arg("ensemble");
  if (!path) return null_arg("path");
  return guarded([&] { write_text_file(path, ensemble_csv(e->ensemble)); });
}

/* protocol */

dfs_status dfs_margin(const double* quantities, const double* lambdas, const double* prices,
                      size_t n_positions, double reserve_quantity, double reserve_price,
                      double debt, double* out) {
  if (n_positions > 0 && (!quantities || !lambdas || !prices)) return null_arg("positions");
  if (!out) return null_arg("out");
  return guarded([&] {
    ProtocolState state;
    PriceMap price_map;
    for (std::size_t i = 0; i < n_positions; ++i) {
      const auto id = "asset" + std::to_string(i);
      state.positions.push_back({id, quantities[i], lambdas[i]});
      price_map[id] = prices[i];
    }
    state.reserve_quantity = reserve_quantity;
    state.debt = debt;
    state.validate();
    *out = reserve_quantity > 0 ? margin_with_reserve(state, price_map, reserve_price)
                                : margin_basic(state, price_map);
  });
}

double dfs_liquidity_at(const dfs_liquidity* model, double t) {
  return model ? liquidity_at({model->l0, model->rho}, t) : 0.0;
}

int dfs_liquidity_constraint_satisfied(const double* notionals, size_t n, double omega_max) {
  if (!notionals && n > 0) return 0;
  return liquidity_constraint_satisfied({notionals, n}, omega_max) ? 1 : 0;
}

int dfs_participation_ok(double r_d, double psi, double r_f) {
  return participation_ok({r_d, psi, r_f}) ? 1 : 0;
}

dfs_status dfs_run_liquidation(double collateral_units, double reserve_units, double debt,
                               const double* collateral_path, const double* reserve_path,
                               size_t n_days, const dfs_liquidity* liquidity, dfs_trace** out) {
  if ((!collateral_path || !reserve_path) && n_days > 0) return null_arg("paths");
  if (!liquidity) return null_arg("liquidity");
  if (!out) return null_arg("out");
  return guarded([&] {
    ProtocolState state;
    state.positions.push_back({"collateral", collateral_units, 0.0});
    state.reserve_quantity = reserve_units;
    state.debt = debt;
    *out = new dfs_trace{run_liquidation(state, {collateral_path, n_days}, {reserve_path, n_days},
                                         {liquidity->l0, liquidity->rho})};
  });
}

void dfs_trace_free(dfs_trace* trace) { delete trace; }

size_t dfs_trace_length(const dfs_trace* trace) { return trace ? trace->trace.days.size() : 0; }

dfs_status dfs_trace_day(const dfs_trace* trace, size_t index, dfs_liquidation_day* out) {
  if (!trace) return null_arg("trace");
  if (!out) return null_arg("out");
  if (index >= trace->trace.days.size())
    return fail(DFS_ERR_INVALID_ARGUMENT, "trace index out of range");
  const auto& d = trace->trace.days[index];
  *out = {d.day,      d.collateral_price, d.reserve_price,        d.units_sold,
          d.proceeds, d.debt_remaining,   d.collateral_remaining, d.margin};
  return DFS_OK;
}

int dfs_trace_first_negative_day(const dfs_trace* trace) {
  if (!trace || !trace->trace.first_negative_day) return -1;
  return *trace->trace.first_negative_day;
}

dfs_status dfs_trace_write_csv(const dfs_trace* trace, const char* path) {
  if (!trace) return null_arg("trace");
  if (!path) return null_arg("path");
  return guarded([&] { write_text_file(path, trace_csv(trace->trace)); });
}

/* stress */

dfs_status dfs_scenario_baseline(dfs_scenario** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new dfs_scenario{ScenarioConfig::baseline()}; });
}

dfs_status dfs_scenario_load(const char* path, dfs_scenario** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded(
      [&] { *out = new dfs_scenario{parse_stress_config(read_text_file(path)).scenario}; });
}

dfs_status dfs_scenario_parse(const char* json_text, dfs_scenario** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new dfs_scenario{parse_stress_config(json_text).scenario}; });
}

void dfs_scenario_free(dfs_scenario* scenario) { delete scenario; }

dfs_status dfs_scenario_set_seed(dfs_scenario* scenario, uint64_t seed) {
  if (!scenario) return null_arg("scenario");
  scenario->config.seed = seed;
  return DFS_OK;
}

dfs_status dfs_scenario_set_paths(dfs_scenario* scenario, size_t n_paths) {
  if (!scenario) return null_arg("scenario");
  if (n_paths < 1) return fail(DFS_ERR_INVALID_PARAMS, "n_paths must be >= 1");
  scenario->config.n_paths = n_paths;
  return DFS_OK;
}

dfs_status dfs_scenario_set_correlation(dfs_scenario* scenario, double rho) {
  if (!scenario) return null_arg("scenario");
  if (!(rho >= -1.0 && rho <= 1.0))
    return fail(DFS_ERR_INVALID_PARAMS, "correlation must lie in [-1, 1]");
  scenario->config.rho_corr = rho;
  return DFS_OK;
}

dfs_status dfs_scenario_set_debt_levels(dfs_scenario* scenario, const double* debts, size_t n) {
  if (!scenario) return null_arg("scenario");
  if (!debts || n == 0) return fail(DFS_ERR_INVALID_PARAMS, "debt levels must be non-empty");
  for (size_t i = 0; i < n; ++i)
    if (!(debts[i] > 0)) return fail(DFS_ERR_INVALID_PARAMS, "debt levels must be positive");
  scenario->config.debt_levels.assign(debts, debts + n);
  return DFS_OK;
}

dfs_status dfs_scenario_set_regimes(dfs_scenario* scenario, const dfs_liquidity* regimes,
                                    size_t n) {
  if (!scenario) return null_arg("scenario");
  if (!regimes || n == 0) return fail(DFS_ERR_INVALID_PARAMS, "regimes must be non-empty");
  std::vector<LiquidityRegime> r;
  for (size_t i = 0; i < n; ++i) {
    if (!(regimes[i].l0 >= 0) || !(regimes[i].rho >= 0))
      return fail(DFS_ERR_INVALID_PARAMS, "l0 and rho must be non-negative");
    r.push_back({"regime" + std::to_string(i), {regimes[i].l0, regimes[i].rho}});
  }
  scenario->config.liquidity_regimes = std::move(r);
  return DFS_OK;
}

dfs_status dfs_run_scenario(const dfs_scenario* scenario, unsigned threads, dfs_report** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  return guarded([&] {
    RunOptions opts;
    opts.threads = threads == 0 ? 1 : threads;
    *out = new dfs_report{run_scenario(scenario->config, opts)};
  });
}

void dfs_report_free(dfs_report* report) { delete report; }

size_t dfs_report_cell_count(const dfs_report* report) {
  return report ? report->report.cells.size() : 0;
}

dfs_status dfs_report_cell(const dfs_report* report, size_t index, dfs_cell* out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  if (index >= report->report.cells.size())
    return fail(DFS_ERR_INVALID_ARGUMENT, "cell index out of range");
  const auto& c = report->report.cells[index];
  *out = {c.debt,
          c.regime.model.l0,
          c.regime.model.rho,
          c.path_index,
          c.first_negative_day ? *c.first_negative_day : -1,
          c.terminal_margin};
  return DFS_OK;
}

dfs_status dfs_report_cell_trace(const dfs_report* report, size_t index, dfs_trace** out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  if (index >= report->report.cells.size())
    return fail(DFS_ERR_INVALID_ARGUMENT, "cell index out of range");
  return guarded([&] { *out = new dfs_trace{report->report.cells[index].trace}; });
}

dfs_status dfs_heatmap(const dfs_scenario* base, const double* debt_grid, size_t n_debt,
                       const double* l0_grid, size_t n_l0, double liquidity_decay,
                       unsigned threads, int* out_days) {
  if (!base) return null_arg("base");
  if (!debt_grid || !l0_grid) return null_arg("grid");
  if (!out_days) return null_arg("out_days");
  return guarded([&] {
    RunOptions opts;
    opts.threads = threads == 0 ? 1 : threads;
    const auto map =
        heatmap(base->config, {debt_grid, n_debt}, {l0_grid, n_l0}, liquidity_decay, opts);
    for (std::size_t i = 0; i < map.days.size(); ++i)
      out_days[i] = map.days[i] ? *map.days[i] : -1;
  });
}

/* attack */

dfs_status dfs_sweep_cost(const dfs_book* books, size_t n_books, double target_qty,
                          double* total_cost, double* venue_fills, double* max_fillable) {
  if (!books && n_books > 0) return null_arg("books");
  if (!total_cost) return null_arg("total_cost");
  try {
    const auto b = to_books(books, n_books);
    const auto result = sweep_cost(b, target_qty);
    *total_cost = result.total_cost;
    if (venue_fills)
      for (std::size_t i = 0; i < result.fills.size(); ++i) venue_fills[i] = result.fills[i].quantity;
    g_last_error.clear();
    return DFS_OK;
  } catch (const InsufficientDepthError& e) {
    if (max_fillable) *max_fillable = e.max_fillable();
    return fail(DFS_ERR_INSUFFICIENT_DEPTH, e.what());
  } catch (...) {
    return guarded([] { throw; });
  }
}

dfs_status dfs_flash_loan_cost(const dfs_flash_pool* pools, size_t n_pools, double amount,
                               double* allocations, double* total_interest) {
  if (!pools && n_pools > 0) return null_arg("pools");
  if (!total_interest) return null_arg("total_interest");
  return guarded([&] {
    const auto p = to_pools(pools, n_pools);
    const auto quote = flash_loan_cost(p, amount);
    if (allocations) {
      std::fill_n(allocations, n_pools, 0.0);
      // Allocations are reported in fee order; map back by position.
      std::vector<bool> used(n_pools, false);
      for (const auto& a : quote.allocations) {
        for (std::size_t i = 0; i < n_pools; ++i) {
          if (!used[i] && p[i].pool_id == a.pool_id) {
            allocations[i] = a.amount;
            used[i] = true;
            break;
          }
        }
      }
    }
    *total_interest = quote.total_interest;
  });
}

dfs_status dfs_voting_gas_budget(uint64_t gas_limit, uint64_t per_vote, double block_fraction,
                                 uint64_t* votes) {
  if (!votes) return null_arg("votes");
  return guarded([&] { *votes = voting_gas_budget(gas_limit, per_vote, block_fraction); });
}

dfs_status dfs_attack_profit(const dfs_attack_plan* plan, dfs_strategy strategy,
                             dfs_attack_result* out) {
  if (!plan) return null_arg("plan");
  if (!out) return null_arg("out");
  if (!plan->books && plan->n_books > 0) return null_arg("plan.books");
  if (!plan->pools && plan->n_pools > 0) return null_arg("plan.pools");
  return guarded([&] {
    AttackPlan p;
    p.tokens_needed = plan->tokens_needed;
    p.books = to_books(plan->books, plan->n_books);
    p.flash_pools = to_pools(plan->pools, plan->n_pools);
    p.seizable_collateral = plan->seizable_collateral;
    p.mintable_debt = plan->mintable_debt;
    p.governance_token_price = plan->governance_token_price;
    p.loan_currency_price = plan->loan_currency_price;
    p.gas_cost = plan->gas_cost;
    const auto r = attack_profit(
        p, strategy == DFS_FLASHLOAN ? AttackStrategy::FlashLoan : AttackStrategy::Crowdfund);
    dfs_attack_result res{};
    res.executed = r.executed ? 1 : 0;
    res.net_profit = r.net_profit;
    res.loan_currency = r.holdings.loan_currency;
    res.governance_tokens = r.holdings.governance_tokens;
    res.debt_tokens = r.holdings.debt_tokens;
    res.sweep_cost = r.sweep ? r.sweep->total_cost : 0.0;
    res.naive_cost = r.naive_cost;
    res.loan_interest = r.loan ? r.loan->total_interest : 0.0;
    *out = res;
  });
}

/* contagion */

dfs_status dfs_sweepable_total(const double* notionals, size_t n, const double* holdings_cap,
                               double* out) {
  if (!notionals && n > 0) return null_arg("notionals");
  if (!out) return null_arg("out");
  return guarded([&] {
    MarketSnapshot snap;
    for (size_t i = 0; i < n; ++i)
      snap.entries.push_back({"market" + std::to_string(i), "", notionals[i]});
    *out = sweepable_total(snap, holdings_cap ? std::optional<double>(*holdings_cap) : std::nullopt);
  });
}

dfs_status dfs_max_systemic_loss(const dfs_composition* model, unsigned threads, double* samples,
                                 dfs_loss_summary* out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  return guarded([&] {
    CompositionModel m;
    m.n_protocols = model->n_protocols;
    m.total_debt = model->total_debt;
    m.lambda_low = model->lambda_low;
    m.lambda_high = model->lambda_high;
    m.seed = model->seed;
    m.n_samples = model->n_samples;
    const auto d = max_systemic_loss(m, threads == 0 ? 1 : threads);
    if (samples) std::copy(d.samples.begin(), d.samples.end(), samples);
    *out = {d.mean, d.min, d.max};
  });
}

/* commands */

dfs_status dfs_cmd_ingest(const char* csv_path, const char* out_json, dfs_return_stats* out_stats) {
  if (!csv_path) return null_arg("csv_path");
  return guarded([&] {
    const auto r = run_ingest(csv_path, out_json ? out_json : "");
    if (out_stats) *out_stats = {r.stats.mu, r.stats.sigma, r.stats.n};
  });
}

dfs_status dfs_cmd_stress(const char* config_path, const char* out_dir,
                          const dfs_run_options* options) {
  if (!config_path) return null_arg("config_path");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] { run_stress(config_path, out_dir, to_options(options)); });
}

dfs_status dfs_cmd_heatmap(const char* config_path, const char* out_dir,
                           const dfs_run_options* options) {
  if (!config_path) return null_arg("config_path");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] { run_heatmap(config_path, out_dir, to_options(options)); });
}

dfs_status dfs_cmd_sweep(const char* config_path, const char* out_json, char** json_out) {
  if (!config_path) return null_arg("config_path");
  return guarded([&] {
    const auto text = run_sweep(config_path, out_json ? out_json : "");
    if (json_out) *json_out = dup_string(text);
  });
}

dfs_status dfs_cmd_attack(const char* plan_path, const char* out_json, char** json_out) {
  if (!plan_path) return null_arg("plan_path");
  return guarded([&] {
    const auto text = run_attack(plan_path, out_json ? out_json : "");
    if (json_out) *json_out = dup_string(text);
  });
}

dfs_status dfs_cmd_contagion(const char* config_path, const char* out_dir,
                             const dfs_run_options* options) {
  if (!config_path) return null_arg("config_path");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] { run_contagion(config_path, out_dir, to_options(options)); });
}

}  // extern "C"
