#include "defistress/paths.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "defistress/error.hpp"
#include "defistress/parallel.hpp"
#include "defistress/rng.hpp"

namespace defistress {

void GbmParams::validate() const {
  if (!(p0 > 0) || !std::isfinite(p0))
    throw Error(ErrorCode::InvalidParams, "p0 must be positive");
  if (!(sigma >= 0) || !std::isfinite(sigma))
    throw Error(ErrorCode::InvalidParams, "sigma must be non-negative");
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidParams, "mu must be finite");
}

namespace {

void check_shape(int horizon_days, std::size_t n_paths) {
  if (horizon_days < 1) throw Error(ErrorCode::InvalidParams, "horizon_days must be >= 1");
  if (n_paths < 1) throw Error(ErrorCode::InvalidParams, "n_paths must be >= 1");
  if (n_paths > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorCode::InvalidParams, "n_paths exceeds the substream index range");
}

double gbm_price(const GbmParams& p, int t, double w) {
  const double price =
      p.p0 * std::exp((p.mu - 0.5 * p.sigma * p.sigma) * static_cast<double>(t) + p.sigma * w);
  if (!(price > 0) || !std::isfinite(price))
    throw Error(ErrorCode::Numeric,
                "simulated price left the representable range on day " + std::to_string(t));
  return price;
}

}  // namespace

PriceMatrix simulate_gbm(const GbmParams& params, int horizon_days, std::size_t n_paths,
                         std::uint64_t seed, unsigned threads) {
  params.validate();
  check_shape(horizon_days, n_paths);
  PriceMatrix out(n_paths, static_cast<std::size_t>(horizon_days) + 1);
  parallel_for(n_paths, threads, [&](std::size_t k) {
    NormalStream z(seed, static_cast<std::uint32_t>(k), 0);
    auto row = out.row(k);
    row[0] = params.p0;
    double w = 0.0;
    for (int t = 1; t <= horizon_days; ++t) {
      w += z.next();
      row[t] = gbm_price(params, t, w);
    }
  });
  return out;
}

PathEnsemble simulate_correlated(const GbmParams& collateral, const GbmParams& reserve,
                                 double rho, int horizon_days, std::size_t n_paths,
                                 std::uint64_t seed, unsigned threads) {
  collateral.validate();
  reserve.validate();
  if (!(rho >= -1.0 && rho <= 1.0))
    throw Error(ErrorCode::InvalidParams, "correlation must lie in [-1, 1]");
  check_shape(horizon_days, n_paths);

  PathEnsemble e;
  e.horizon_days = horizon_days;
  e.n_paths = n_paths;
  e.seed = seed;
  e.correlation = rho;
  const std::size_t cols = static_cast<std::size_t>(horizon_days) + 1;
  e.collateral = PriceMatrix(n_paths, cols);
  e.reserve = PriceMatrix(n_paths, cols);
  const double orth = std::sqrt(1.0 - rho * rho);

  parallel_for(n_paths, threads, [&](std::size_t k) {
    NormalStream z_col(seed, static_cast<std::uint32_t>(k), 0);
    NormalStream z_ind(seed, static_cast<std::uint32_t>(k), 1);
    auto col = e.collateral.row(k);
    auto res = e.reserve.row(k);
    col[0] = collateral.p0;
    res[0] = reserve.p0;
    double w_col = 0.0;
    double w_res = 0.0;
    for (int t = 1; t <= horizon_days; ++t) {
      const double zc = z_col.next();
      const double zr = rho * zc + orth * z_ind.next();
      w_col += zc;
      w_res += zr;
      col[t] = gbm_price(collateral, t, w_col);
      res[t] = gbm_price(reserve, t, w_res);
    }
  });
  return e;
}

WorstPath fastest_undercollateralization(const PathEnsemble& ensemble,
                                         const ProtocolState& initial,
                                         const LiquidityModel& liquidity, unsigned threads) {
  if (ensemble.n_paths == 0)
    throw Error(ErrorCode::InvalidParams, "ensemble has no paths");
  std::vector<LiquidationOutcome> outcomes(ensemble.n_paths);
  parallel_for(ensemble.n_paths, threads, [&](std::size_t k) {
    outcomes[k] = liquidation_outcome(initial, ensemble.collateral.row(k),
                                      ensemble.reserve.row(k), liquidity);
  });

  // Sequential reduction keeps the tie-break independent of scheduling.
  WorstPath best{0, outcomes[0].first_negative_day, outcomes[0].terminal_margin, 0.0};
  for (std::size_t k = 1; k < outcomes.size(); ++k) {
    const auto& o = outcomes[k];
    bool better = false;
    if (o.first_negative_day && best.first_negative_day)
      better = *o.first_negative_day < *best.first_negative_day;
    else if (o.first_negative_day)
      better = true;
    else if (!best.first_negative_day)
      better = o.terminal_margin < best.terminal_margin;
    if (better) best = {k, o.first_negative_day, o.terminal_margin, 0.0};
  }
  best.min_terminal_margin = outcomes[0].terminal_margin;
  for (const auto& o : outcomes) best.min_terminal_margin = std::min(best.min_terminal_margin, o.terminal_margin);
  return best;
}

}  // namespace defistress
