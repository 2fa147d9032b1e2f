// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "defistress/attack.hpp"
#include "defistress/config.hpp"
#include "defistress/contagion.hpp"
#include "defistress/market_data.hpp"
#include "defistress/paths.hpp"
#include "defistress/stress.hpp"

using namespace defistress;
namespace fs = std::filesystem;

namespace {

constexpr double kMu = 0.001592;
constexpr double kSigma = 0.050581;
constexpr double kP0 = 223.0;
const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int days_or_inf(std::optional<int> d) { return d ? *d : std::numeric_limits<int>::max(); }

ScenarioConfig baseline_config(std::uint64_t seed) {
  auto c = ScenarioConfig::baseline();
  c.seed = seed;
  return c;
}

// 1. Parameter recovery from daily ETH/USD closes.
Outcome parameter_recovery() {
  fs::path csv;
  if (const char* env = std::getenv("DEFI_STRESS_ETH_CSV"); env && *env) csv = env;
  else csv = fs::path(DEFISTRESS_DATA_DIR) / "ETH-USD.csv";
  if (!fs::exists(csv))
    return {false, "no ETH/USD daily CSV at " + csv.string() +
                       " (set DEFI_STRESS_ETH_CSV); calibration cannot be checked"};

  const auto t0 = std::chrono::steady_clock::now();
  const auto full = load_series(csv);
  using namespace std::chrono;
  std::vector<Ohlcv> window;
  for (const auto& o : full.observations())
    if (o.date >= year_month_day{2018y / 1 / 1} && o.date <= year_month_day{2020y / 2 / 7})
      window.push_back(o);
  const auto r = log_returns(PriceSeries(std::move(window)));
  const auto stats = estimate_stats(r);
  const auto jb = jarque_bera(r);
  const double secs = seconds_since(t0);

  const bool ok = std::abs(std::abs(stats.mu) - kMu) <= 1e-3 &&
                  std::abs(stats.sigma - kSigma) <= 1e-3 && jb.p_value < 0.05 && secs < 1.0;
  return {ok, fmt("n=%zu mu=%.6f sigma=%.6f JB p=%.3g in %.3fs", stats.n, stats.mu, stats.sigma,
                  jb.p_value, secs)};
}

// 2. GBM moments at 100k paths.
Outcome gbm_moments() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = simulate_gbm({kP0, kMu, kSigma}, 100, 100'000, 20200207, 4);
  double sum = 0;
  for (std::size_t k = 0; k < m.rows(); ++k) sum += m(k, 100);
  const double mean = sum / m.rows();
  const double expected = kP0 * std::exp(kMu * 100);
  const double rel = std::abs(mean / expected - 1.0);

  // Under P = p0 exp((mu - sigma^2/2) t + sigma W) the martingale drift is mu = 0;
  // mu = sigma^2/2 instead lands on exp(sigma^2 T / 2), which is checked too.
  auto ratio = [](double mu, std::uint64_t seed) {
    const auto m = simulate_gbm({1.0, mu, kSigma}, 100, 100'000, seed, 4);
    double s = 0, ss = 0;
    for (std::size_t k = 0; k < m.rows(); ++k) {
      s += m(k, 100);
      ss += m(k, 100) * m(k, 100);
    }
    const double n = m.rows();
    const double mean = s / n;
    return std::pair{mean, std::sqrt((ss / n - mean * mean) / (n - 1))};
  };
  const auto [mart, mart_se] = ratio(0.0, 20200208);
  const auto [half, half_se] = ratio(kSigma * kSigma / 2, 20200209);
  const double half_expected = std::exp(kSigma * kSigma * 100 / 2);
  const double secs = seconds_since(t0);
  const bool ok = rel < 0.01 && std::abs(mart - 1.0) < 3 * mart_se &&
                  std::abs(half - half_expected) < 3 * half_se && secs < 30.0;
  return {ok, fmt("E[P_T] rel err %.4f%%; mu=0 ratio %.5f (%.2f SE from 1); mu=sigma^2/2 ratio %.5f "
                  "(%.2f SE from exp(sigma^2 T/2)=%.5f); %.1fs",
                  100 * rel, mart, std::abs(mart - 1.0) / mart_se, half,
                  std::abs(half - half_expected) / half_se, half_expected, secs)};
}

// 3. 100m debt never goes negative in any regime.
Outcome no_default_cell() {
  int bad = 0;
  for (auto seed : kSeeds) {
    auto c = baseline_config(seed);
    c.debt_levels = {100e6};
    const auto r = run_scenario(c, {4});
    for (const auto& cell : r.cells)
      if (cell.first_negative_day) ++bad;
  }
  return {bad == 0, fmt("%zu seeds x 3 regimes, %d cells with a negative margin", kSeeds.size(), bad)};
}

// 4. 400m debt with decaying liquidity defaults within the band.
Outcome default_cell() {
  int with_event = 0;
  int min_day = std::numeric_limits<int>::max();
  std::string days;
  for (auto seed : kSeeds) {
    auto c = baseline_config(seed);
    c.debt_levels = {400e6};
    c.liquidity_regimes = {{"illiquidity", {30000, 0.01}}};
    const auto r = run_scenario(c, {4});
    const auto d = r.cells[0].first_negative_day;
    if (d) {
      ++with_event;
      min_day = std::min(min_day, *d);
    }
    days += (days.empty() ? "" : ",") + (d ? std::to_string(*d) : std::string("none"));
  }
  const bool ok = with_event >= 9 && min_day >= 10 && min_day <= 40;
  return {ok, fmt("events in %d/10 seeds, min day %d (days: %s)", with_event, min_day, days.c_str())};
}

// 5. Heatmap monotonicity on the 4x4 grid.
Outcome heatmap_monotone() {
  const std::vector<double> debt{100e6, 200e6, 300e6, 400e6}, l0{10000, 20000, 30000, 40000};
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0;
  double slowest = 0;
  for (auto seed : kSeeds) {
    const auto t1 = std::chrono::steady_clock::now();
    const auto h = heatmap(baseline_config(seed), debt, l0, 0.01, {4});
    slowest = std::max(slowest, seconds_since(t1));
    for (std::size_t i = 0; i < debt.size(); ++i)
      for (std::size_t j = 0; j < l0.size(); ++j) {
        if (i > 0 && days_or_inf(h.at(i, j)) > days_or_inf(h.at(i - 1, j))) ++violations;
        if (j > 0 && days_or_inf(h.at(i, j)) < days_or_inf(h.at(i, j - 1))) ++violations;
      }
  }
  const bool ok = violations == 0 && slowest < 600.0;
  return {ok, fmt("%zu seeds, %d violations, slowest grid %.1fs (total %.1fs)", kSeeds.size(),
                  violations, slowest, seconds_since(t0))};
}

// 6. Correlation effect on the worst-case terminal margin.
Outcome correlation_effect() {
  const std::vector<double> rhos{-0.9, 0.1, 0.9};
  std::vector<std::uint64_t> seeds{20200207};
  seeds.insert(seeds.end(), kSeeds.begin(), kSeeds.end());
  int ordered = 0;
  std::string first;
  for (auto seed : seeds) {
    auto c = baseline_config(seed);
    c.debt_levels = {400e6};
    c.liquidity_regimes = {{"illiquidity", {30000, 0.01}}};
    const auto sweep = correlation_sweep(c, rhos, {4});
    const double neg = sweep[0].second.cells[0].min_terminal_margin;
    const double weak = sweep[1].second.cells[0].min_terminal_margin;
    const double strong = sweep[2].second.cells[0].min_terminal_margin;
    if (neg >= weak && weak >= strong) ++ordered;
    if (first.empty())
      first = fmt("seed %llu: %.1fm >= %.1fm >= %.1fm (selected worst paths end at %.1fm / %.1fm / %.1fm)",
                  static_cast<unsigned long long>(seed), neg / 1e6, weak / 1e6, strong / 1e6,
                  sweep[0].second.cells[0].terminal_margin / 1e6,
                  sweep[1].second.cells[0].terminal_margin / 1e6,
                  sweep[2].second.cells[0].terminal_margin / 1e6);
  }
  return {ordered == static_cast<int>(seeds.size()),
          fmt("minimum terminal margin over all paths, rho -0.9/0.1/0.9, ordered in %d/%zu seeds; %s", ordered, seeds.size(), first.c_str())};
}

double brute_force_cost(const std::vector<OrderBookSnapshot>& books, long target) {
  std::vector<double> units;
  for (const auto& b : books)
    for (const auto& l : b.levels)
      for (long i = 0; i < static_cast<long>(l.quantity); ++i) units.push_back(l.price);
  std::sort(units.begin(), units.end());
  double cost = 0.0;
  for (long i = 0; i < target; ++i) cost += units[i];
  return cost;
}

// 7. Governance attack arithmetic.
Outcome attack_arithmetic() {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> n_levels(1, 20), price(1, 1000), qty(1, 50), venue(0, 2);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<OrderBookSnapshot> books{{"a", {}}, {"b", {}}, {"c", {}}};
    std::vector<std::vector<int>> prices(3);
    const int n = n_levels(gen);
    for (int i = 0; i < n; ++i) prices[venue(gen)].push_back(price(gen));
    long depth = 0;
    for (int v = 0; v < 3; ++v) {
      std::sort(prices[v].begin(), prices[v].end());
      for (int p : prices[v]) {
        const int q = qty(gen);
        books[v].levels.push_back({double(p), double(q)});
        depth += q;
      }
    }
    std::erase_if(books, [](const auto& b) { return b.levels.empty(); });
    const long target = std::uniform_int_distribution<long>(1, depth)(gen);
    if (sweep_cost(books, double(target)).total_cost != brute_force_cost(books, target)) ++mismatches;
  }

  const auto votes = voting_gas_budget(10'000'000, 69'000, 0.5);

  auto job = parse_attack_config(slurp(fs::path(DEFISTRESS_DATA_DIR) / "maker_feb2020.json"));
  job.plan.gas_cost = job.gas.flashloan;
  const auto flash = attack_profit(job.plan, AttackStrategy::FlashLoan);
  job.plan.gas_cost = job.gas.crowdfund;
  const auto crowd = attack_profit(job.plan, AttackStrategy::Crowdfund);

  const double flash_err = flash.net_profit / 191e6 - 1.0;
  const double crowd_err = crowd.net_profit / 263e6 - 1.0;
  const bool holdings = std::abs(flash.holdings.loan_currency / 55e3 - 1.0) <= 0.05 &&
                        flash.holdings.governance_tokens == 50e3 &&
                        flash.holdings.debt_tokens == 145e6;
  const bool ok = mismatches == 0 && votes == 72 && flash.executed && std::abs(flash_err) <= 0.05 &&
                  holdings && crowd.executed && std::abs(crowd_err) <= 0.10;
  return {ok, fmt("oracle mismatches %d/1000, votes %llu, flashloan %.1fm (%+.1f%%) holding %.0f ETH "
                  "/ %.0f MKR / %.0fm DAI, crowdfund %.1fm (%+.1f%%)",
                  mismatches, static_cast<unsigned long long>(votes), flash.net_profit / 1e6,
                  100 * flash_err, flash.holdings.loan_currency, flash.holdings.governance_tokens,
                  flash.holdings.debt_tokens / 1e6, crowd.net_profit / 1e6, 100 * crowd_err)};
}

// 8. Contagion losses and liquidity sweeping.
Outcome contagion() {
  auto model = [](double lo, double hi) {
    CompositionModel m;
    m.n_protocols = 30;
    m.total_debt = 400e6;
    m.lambda_low = lo;
    m.lambda_high = hi;
    m.seed = 20200207;
    m.n_samples = 100'000;
    return m;
  };
  const auto a = max_systemic_loss(model(1.01, 1.05), 4);
  const auto b = max_systemic_loss(model(1.01, 1.5), 4);
  const auto c = max_systemic_loss(model(1.01, 3.0), 4);
  const double expected = 400e6 * std::log(1.05 / 1.01) / 0.04;
  const double rel = std::abs(a.mean / expected - 1.0);

  const auto snap = parse_snapshot_csv(slurp(fs::path(DEFISTRESS_DATA_DIR) / "dai_markets_feb2020.csv"));
  const double unlimited = sweepable_total(snap, std::nullopt);
  const double capped = sweepable_total(snap, 145e6);

  const bool ok = rel < 0.005 && a.mean > b.mean && b.mean > c.mean &&
                  std::abs(unlimited - 211e6) < 1.0 && std::abs(capped - 145e6) < 1.0;
  return {ok, fmt("mean %.2fm vs %.2fm (%.3f%%), ordering %.1fm > %.1fm > %.1fm, sweep %.0fm / %.0fm",
                  a.mean / 1e6, expected / 1e6, 100 * rel, a.mean / 1e6, b.mean / 1e6, c.mean / 1e6,
                  unlimited / 1e6, capped / 1e6)};
}

std::map<std::string, std::string> read_outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto rel = fs::relative(e.path(), dir).generic_string();
    auto text = slurp(e.path());
    if (rel == "manifest.json") {
      // Timestamps are the only fields allowed to differ between runs.
      auto j = nlohmann::ordered_json::parse(text);
      j.erase("started_at");
      j.erase("finished_at");
      text = j.dump();
    }
    out.emplace(std::move(rel), std::move(text));
  }
  return out;
}

// 9. Byte-identical stress outputs across runs and thread counts.
Outcome determinism() {
  const fs::path tmp = fs::temp_directory_path() / ("defistress-acceptance-" + std::to_string(std::random_device{}()));
  const auto config = fs::path(DEFISTRESS_DATA_DIR) / "baseline_stress.json";
  std::vector<std::map<std::string, std::string>> runs;
  std::string detail;
  for (int threads : {1, 1, 4, 8}) {
    const auto out = tmp / ("run" + std::to_string(runs.size()));
    const std::string cmd = std::string("\"") + DEFISTRESS_CLI + "\" stress --config \"" +
                            config.string() + "\" --out \"" + out.string() + "\" --threads " +
                            std::to_string(threads);
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(tmp);
      return {false, "stress command failed: " + cmd};
    }
    runs.push_back(read_outputs(out));
  }
  fs::remove_all(tmp);
  int differing = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].size() != runs[0].size()) ++differing;
    for (const auto& [name, bytes] : runs[0]) {
      const auto it = runs[i].find(name);
      if (it == runs[i].end() || it->second != bytes) ++differing;
    }
  }
  return {differing == 0 && !runs[0].empty(),
          fmt("4 runs (threads 1,1,4,8), %zu files each, %d differences outside manifest timestamps",
              runs[0].size(), differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"parameter recovery", parameter_recovery},
      {"GBM moments", gbm_moments},
      {"stress baseline, no-default cell", no_default_cell},
      {"stress baseline, default cell", default_cell},
      {"heatmap monotonicity", heatmap_monotone},
      {"correlation effect", correlation_effect},
      {"attack arithmetic", attack_arithmetic},
      {"contagion", contagion},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
