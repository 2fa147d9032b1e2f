/*
 * defistress C API.
 *
 * Objects are opaque handles created by dfs_*_load / dfs_run_* and released
 * with the matching dfs_*_free. Every fallible call returns a dfs_status; on
 * failure dfs_last_error() holds a one-line message for the calling thread.
 * Output parameters are left untouched on failure.
 */
#ifndef DEFISTRESS_H
#define DEFISTRESS_H

#include <stddef.h>
#include <stdint.h>

#if defined(DEFISTRESS_BUILDING_LIBRARY)
#define DFS_API __attribute__((visibility("default")))
#else
#define DFS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dfs_status {
  DFS_OK = 0,
  DFS_ERR_INVALID_ARGUMENT = 1, /* null handle or output pointer */
  DFS_ERR_PARSE = 2,
  DFS_ERR_EMPTY_SERIES = 3,
  DFS_ERR_NON_MONOTONIC_TIME = 4,
  DFS_ERR_INSUFFICIENT_DATA = 5,
  DFS_ERR_DEGENERATE_SAMPLE = 6,
  DFS_ERR_INVALID_PARAMS = 7,
  DFS_ERR_MISSING_PRICE = 8,
  DFS_ERR_HORIZON_MISMATCH = 9,
  DFS_ERR_INSUFFICIENT_DEPTH = 10,
  DFS_ERR_INSUFFICIENT_POOL_LIQUIDITY = 11,
  DFS_ERR_INVALID_RANGE = 12,
  DFS_ERR_IO = 13,
  DFS_ERR_SCHEMA = 14,
  DFS_ERR_NUMERIC = 15,
  DFS_ERR_INTERNAL = 16
} dfs_status;

DFS_API const char* dfs_version(void);
DFS_API const char* dfs_status_name(dfs_status status);
DFS_API const char* dfs_last_error(void);
/* Process exit code for a status: 0 success, 3 numeric/internal, 2 otherwise. */
DFS_API int dfs_exit_code(dfs_status status);

/* Strings returned through char** are owned by the caller. */
DFS_API void dfs_string_free(char* s);

/* ---- market data ------------------------------------------------------- */

typedef struct dfs_series dfs_series;

typedef struct dfs_return_stats {
  double mu;
  double sigma;
  size_t n;
} dfs_return_stats;

typedef struct dfs_jarque_bera {
  double statistic;
  double p_value;
} dfs_jarque_bera;

DFS_API dfs_status dfs_series_load(const char* path, dfs_series** out);
DFS_API dfs_status dfs_series_parse(const char* csv_text, size_t length, dfs_series** out);
DFS_API void dfs_series_free(dfs_series* series);
DFS_API size_t dfs_series_size(const dfs_series* series);
/* Writes min(capacity, size - 1) returns; *written receives size - 1. */
DFS_API dfs_status dfs_series_log_returns(const dfs_series* series, double* out, size_t capacity,
                                          size_t* written);
DFS_API dfs_status dfs_estimate_stats(const double* returns, size_t n, dfs_return_stats* out);
DFS_API dfs_status dfs_jarque_bera_test(const double* returns, size_t n, dfs_jarque_bera* out);

/* ---- price paths ------------------------------------------------------- */

typedef struct dfs_gbm_params {
  double p0;
  double mu;
  double sigma;
} dfs_gbm_params;

typedef struct dfs_ensemble dfs_ensemble;

/* out must hold n_paths * (horizon_days + 1) doubles, row-major by path. */
DFS_API dfs_status dfs_simulate_gbm(const dfs_gbm_params* params, int horizon_days, size_t n_paths,
                                    uint64_t seed, unsigned threads, double* out);
DFS_API dfs_status dfs_simulate_correlated(const dfs_gbm_params* collateral,
                                           const dfs_gbm_params* reserve, double rho,
                                           int horizon_days, size_t n_paths, uint64_t seed,
                                           unsigned threads, dfs_ensemble** out);
DFS_API void dfs_ensemble_free(dfs_ensemble* ensemble);
DFS_API size_t dfs_ensemble_paths(const dfs_ensemble* ensemble);
DFS_API size_t dfs_ensemble_days(const dfs_ensemble* ensemble); /* horizon + 1 */
DFS_API const double* dfs_ensemble_collateral(const dfs_ensemble* ensemble);
DFS_API const double* dfs_ensemble_reserve(const dfs_ensemble* ensemble);
/* CSV rows path,day,collateral_price,reserve_price */
DFS_API dfs_status dfs_ensemble_write_csv(const dfs_ensemble* ensemble, const char* path);

/* ---- protocol ---------------------------------------------------------- */

typedef struct dfs_liquidity {
  double l0;
  double rho;
} dfs_liquidity;

typedef struct dfs_liquidation_day {
  int day;
  double collateral_price;
  double reserve_price;
  double units_sold;
  double proceeds;
  double debt_remaining;
  double collateral_remaining;
  double margin;
} dfs_liquidation_day;

typedef struct dfs_trace dfs_trace;

/* Margin with per-position overcollateralization factors:
   sum (1 + lambda_i) P_i Q_i + reserve_price * reserve_quantity - debt. */
DFS_API dfs_status dfs_margin(const double* quantities, const double* lambdas,
                              const double* prices, size_t n_positions, double reserve_quantity,
                              double reserve_price, double debt, double* out);
DFS_API double dfs_liquidity_at(const dfs_liquidity* model, double t);
DFS_API int dfs_liquidity_constraint_satisfied(const double* notionals, size_t n,
                                               double omega_max);
DFS_API int dfs_participation_ok(double r_d, double psi, double r_f);

DFS_API dfs_status dfs_run_liquidation(double collateral_units, double reserve_units, double debt,
                                       const double* collateral_path, const double* reserve_path,
                                       size_t n_days, const dfs_liquidity* liquidity,
                                       dfs_trace** out);
DFS_API void dfs_trace_free(dfs_trace* trace);
DFS_API size_t dfs_trace_length(const dfs_trace* trace);
DFS_API dfs_status dfs_trace_day(const dfs_trace* trace, size_t index, dfs_liquidation_day* out);
/* -1 when the margin never turns negative. */
DFS_API int dfs_trace_first_negative_day(const dfs_trace* trace);
DFS_API dfs_status dfs_trace_write_csv(const dfs_trace* trace, const char* path);

/* ---- stress tests ------------------------------------------------------ */

typedef struct dfs_scenario dfs_scenario;
typedef struct dfs_report dfs_report;

typedef struct dfs_cell {
  double debt;
  double l0;
  double rho;
  size_t path_index;
  int first_negative_day; /* -1 for none */
  double terminal_margin;
} dfs_cell;

DFS_API dfs_status dfs_scenario_baseline(dfs_scenario** out);
DFS_API dfs_status dfs_scenario_load(const char* path, dfs_scenario** out);
DFS_API dfs_status dfs_scenario_parse(const char* json_text, dfs_scenario** out);
DFS_API void dfs_scenario_free(dfs_scenario* scenario);
DFS_API dfs_status dfs_scenario_set_seed(dfs_scenario* scenario, uint64_t seed);
DFS_API dfs_status dfs_scenario_set_paths(dfs_scenario* scenario, size_t n_paths);
DFS_API dfs_status dfs_scenario_set_correlation(dfs_scenario* scenario, double rho);
DFS_API dfs_status dfs_scenario_set_debt_levels(dfs_scenario* scenario, const double* debts,
                                                size_t n);
DFS_API dfs_status dfs_scenario_set_regimes(dfs_scenario* scenario, const dfs_liquidity* regimes,
                                            size_t n);

DFS_API dfs_status dfs_run_scenario(const dfs_scenario* scenario, unsigned threads,
                                    dfs_report** out);
DFS_API void dfs_report_free(dfs_report* report);
DFS_API size_t dfs_report_cell_count(const dfs_report* report);
DFS_API dfs_status dfs_report_cell(const dfs_report* report, size_t index, dfs_cell* out);
/* Copy of the worst-case trace of one cell; free with dfs_trace_free. */
DFS_API dfs_status dfs_report_cell_trace(const dfs_report* report, size_t index, dfs_trace** out);

/* out_days receives n_debt * n_l0 values, row-major by debt, -1 for none. */
DFS_API dfs_status dfs_heatmap(const dfs_scenario* base, const double* debt_grid, size_t n_debt,
                               const double* l0_grid, size_t n_l0, double liquidity_decay,
                               unsigned threads, int* out_days);

/* ---- governance attack ------------------------------------------------- */

typedef struct dfs_book {
  const char* venue;
  const double* prices; /* ascending */
  const double* quantities;
  size_t n_levels;
} dfs_book;

typedef struct dfs_flash_pool {
  const char* pool;
  double available;
  double fee_rate;
} dfs_flash_pool;

typedef enum dfs_strategy { DFS_CROWDFUND = 0, DFS_FLASHLOAN = 1 } dfs_strategy;

typedef struct dfs_attack_plan {
  double tokens_needed;
  const dfs_book* books;
  size_t n_books;
  const dfs_flash_pool* pools;
  size_t n_pools;
  double seizable_collateral;
  double mintable_debt;
  double governance_token_price;
  double loan_currency_price;
  double gas_cost;
} dfs_attack_plan;

typedef struct dfs_attack_result {
  int executed;
  double net_profit;
  double loan_currency;
  double governance_tokens;
  double debt_tokens;
  double sweep_cost;    /* 0 for crowdfund */
  double naive_cost;    /* 0 for crowdfund */
  double loan_interest; /* 0 for crowdfund */
} dfs_attack_result;

/* venue_fills (nullable) receives n_books quantities in input order. On
   DFS_ERR_INSUFFICIENT_DEPTH, *max_fillable (nullable) receives the depth. */
DFS_API dfs_status dfs_sweep_cost(const dfs_book* books, size_t n_books, double target_qty,
                                  double* total_cost, double* venue_fills, double* max_fillable);
/* allocations (nullable) receives n_pools amounts in input order. */
DFS_API dfs_status dfs_flash_loan_cost(const dfs_flash_pool* pools, size_t n_pools, double amount,
                                       double* allocations, double* total_interest);
DFS_API dfs_status dfs_voting_gas_budget(uint64_t gas_limit, uint64_t per_vote,
                                         double block_fraction, uint64_t* votes);
DFS_API dfs_status dfs_attack_profit(const dfs_attack_plan* plan, dfs_strategy strategy,
                                     dfs_attack_result* out);

/* ---- contagion --------------------------------------------------------- */

typedef struct dfs_composition {
  size_t n_protocols;
  double total_debt;
  double lambda_low; /* full multiplier, > 1 */
  double lambda_high;
  uint64_t seed;
  size_t n_samples;
} dfs_composition;

typedef struct dfs_loss_summary {
  double mean;
  double min;
  double max;
} dfs_loss_summary;

/* holdings_cap may be null for an unlimited cap. */
DFS_API dfs_status dfs_sweepable_total(const double* notionals, size_t n, const double* holdings_cap,
                                       double* out);
/* samples (nullable) receives n_samples losses. */
DFS_API dfs_status dfs_max_systemic_loss(const dfs_composition* model, unsigned threads,
                                         double* samples, dfs_loss_summary* out);

/* ---- commands (file in, files out) ------------------------------------- */

typedef void (*dfs_log_fn)(const char* line, void* user);

typedef struct dfs_run_options {
  int has_seed_override;
  uint64_t seed_override;
  unsigned threads;
  dfs_log_fn log; /* nullable */
  void* log_user;
} dfs_run_options;

/* out_json may be null (no file written); out_stats may be null. */
DFS_API dfs_status dfs_cmd_ingest(const char* csv_path, const char* out_json,
                                  dfs_return_stats* out_stats);
DFS_API dfs_status dfs_cmd_stress(const char* config_path, const char* out_dir,
                                  const dfs_run_options* options);
DFS_API dfs_status dfs_cmd_heatmap(const char* config_path, const char* out_dir,
                                   const dfs_run_options* options);
/* json_out (nullable) receives the report text; free with dfs_string_free. */
DFS_API dfs_status dfs_cmd_sweep(const char* config_path, const char* out_json, char** json_out);
DFS_API dfs_status dfs_cmd_attack(const char* plan_path, const char* out_json, char** json_out);
DFS_API dfs_status dfs_cmd_contagion(const char* config_path, const char* out_dir,
                                     const dfs_run_options* options);

#ifdef __cplusplus
}
#endif

#endif /* DEFISTRESS_H */
