#include "defistress/contagion.hpp"

#include <algorithm>
#include <cmath>

#include "defistress/csv.hpp"
#include "defistress/error.hpp"
#include "defistress/parallel.hpp"
#include "defistress/rng.hpp"

namespace defistress {

double sweepable_total(const MarketSnapshot& snapshot, std::optional<double> holdings_cap) {
  double total = 0.0;
  for (const auto& e : snapshot.entries) {
    if (!(e.available_notional >= 0))
      throw Error(ErrorCode::InvalidParams, e.market_id + ": negative notional");
    total += e.available_notional;
  }
  if (!holdings_cap) return total;
  if (!(*holdings_cap >= 0)) throw Error(ErrorCode::InvalidParams, "holdings cap must be non-negative");
  return std::min(*holdings_cap, total);
}

void CompositionModel::validate() const {
  if (n_protocols < 1) throw Error(ErrorCode::InvalidParams, "n_protocols must be >= 1");
  if (!(total_debt > 0) || !std::isfinite(total_debt))
    throw Error(ErrorCode::InvalidParams, "total_debt must be positive");
  if (!(lambda_low > 1.0) || !(lambda_high >= lambda_low) || !std::isfinite(lambda_high))
    throw Error(ErrorCode::InvalidRange, "lambda range must satisfy 1 < low <= high");
  if (n_samples < 1) throw Error(ErrorCode::InvalidParams, "n_samples must be >= 1");
}

double systemic_loss(double total_debt, std::span<const double> lambdas) {
  if (lambdas.empty()) throw Error(ErrorCode::InvalidParams, "need at least one protocol");
  const double share = total_debt / static_cast<double>(lambdas.size());
  double loss = 0.0;
  for (double l : lambdas) loss += share / l;
  return loss;
}

LossDistribution max_systemic_loss(const CompositionModel& model, unsigned threads) {
  model.validate();
  LossDistribution out;
  out.samples.resize(model.n_samples);
  const double width = model.lambda_high - model.lambda_low;
  parallel_for(model.n_samples, threads, [&](std::size_t s) {
    NormalStream rng(model.seed, static_cast<std::uint32_t>(s), 2);
    std::vector<double> lambdas(model.n_protocols);
    for (auto& l : lambdas) l = model.lambda_low + width * rng.next_uniform();
    out.samples[s] = systemic_loss(model.total_debt, lambdas);
  });
  double sum = 0.0;
  out.min = out.samples.front();
  out.max = out.samples.front();
  for (double v : out.samples) {
    sum += v;
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
  }
  out.mean = sum / static_cast<double>(out.samples.size());
  return out;
}

std::vector<DamageRow> reported_damage_rows() {
  return {
      {"Under-collateralization (price crash) of MakerDAO", 145e6, false},
      {"Under-collateralization (governance attack) of MakerDAO", 211e6, false},
      {"Contagious under-collateralization (price crash) of MakerDAO", 180e6, true},
      {"Contagious under-collateralization (governance attack) of MakerDAO", 246e6, true},
  };
}

std::string damage_table_csv(std::span<const DamageRow> rows) {
  std::string out = "label,loss_usd,lower_bound\n";
  for (const auto& r : rows) {
    out += csv::field(r.label);
    out += ',';
    out += csv::number(r.loss);
    out += ',';
    out += r.lower_bound ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::vector<DamageRow> parse_damage_table_csv(std::string_view text) {
  const auto lines = csv::lines(text);
  if (lines.empty() || lines.front() != "label,loss_usd,lower_bound")
    throw ParseError(0, "expected header label,loss_usd,lower_bound");
  std::vector<DamageRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv::split(lines[i]);
    if (f.size() != 3) throw ParseError(i, "expected 3 fields");
    DamageRow r;
    r.label = f[0];
    const auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), r.loss);
    if (ec != std::errc{} || ptr != f[1].data() + f[1].size())
      throw ParseError(i, "malformed loss '" + f[1] + "'");
    if (f[2] == "true") {
      r.lower_bound = true;
    } else if (f[2] != "false") {
      throw ParseError(i, "lower_bound must be true or false");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace defistress
