#include <doctest.h>

#include <limits>
#include <vector>

#include "defistress/stress.hpp"
#include "support.hpp"

using namespace defistress;
using testing::code_of;

namespace {

int days_or_inf(std::optional<int> d) { return d ? *d : std::numeric_limits<int>::max(); }

ScenarioConfig one_cell(double debt, LiquidityModel liq, std::uint64_t seed = 20200207) {
  auto c = ScenarioConfig::baseline();
  c.seed = seed;
  c.debt_levels = {debt};
  c.liquidity_regimes = {{"cell", liq}};
  return c;
}

}  // namespace

TEST_CASE("baseline config") {
  const auto c = ScenarioConfig::baseline();
  CHECK(c.collateral.p0 == 223.0);
  CHECK(c.collateral.mu == 0.001592);
  CHECK(c.collateral.sigma == 0.050581);
  CHECK(c.reserve.p0 == c.collateral.p0);
  CHECK(c.reserve.sigma == doctest::Approx(c.collateral.sigma / 2));
  CHECK(c.n_paths == 5000);
  CHECK(c.horizon_days == 100);
  CHECK(c.rho_corr == 0.9);
  CHECK(c.reserve_quantity == 1e6);
  CHECK(c.debt_levels == std::vector<double>{100e6, 200e6, 300e6, 400e6});
  REQUIRE(c.liquidity_regimes.size() == 3);
  CHECK(c.liquidity_regimes[2].model.rho == 0.01);
  for (const auto& r : c.liquidity_regimes) CHECK(r.model.l0 == 30000);
  CHECK_NOTHROW(c.validate());

  const auto s = initial_state(c, 400e6);
  CHECK(s.positions[0].quantity == doctest::Approx(400e6 * 1.5 / 223.0));
  CHECK(s.reserve_quantity == 1e6);
  CHECK(s.debt == 400e6);
}

TEST_CASE("config validation") {
  auto c = ScenarioConfig::baseline();
  c.rho_corr = 2.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidParams);
  c = ScenarioConfig::baseline();
  c.debt_levels = {};
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidParams);
  c.debt_levels = {-1};
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidParams);
  c = ScenarioConfig::baseline();
  c.horizon_days = 0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidParams);
}

TEST_CASE("report covers every debt x regime cell") {
  auto c = ScenarioConfig::baseline();
  c.n_paths = 200;
  const auto r = run_scenario(c);
  CHECK(r.cells.size() == 12);
  CHECK(r.n_paths == 200);
  CHECK(r.seed == c.seed);
  for (std::size_t d = 0; d < 4; ++d)
    for (std::size_t g = 0; g < 3; ++g) {
      CHECK(r.cell(d, g).debt == c.debt_levels[d]);
      CHECK(r.cell(d, g).regime.label == c.liquidity_regimes[g].label);
      CHECK(r.cell(d, g).trace.first_negative_day == r.cell(d, g).first_negative_day);
      CHECK(r.cell(d, g).min_terminal_margin <= r.cell(d, g).terminal_margin);
    }
}

TEST_CASE("100m debt never goes negative under constant liquidity") {
  const auto r = run_scenario(one_cell(100e6, {30000, 0.0}));
  CHECK_FALSE(r.cells[0].first_negative_day);
}

TEST_CASE("400m debt under illiquidity goes negative within weeks") {
  const auto r = run_scenario(one_cell(400e6, {30000, 0.01}));
  REQUIRE(r.cells[0].first_negative_day);
  CHECK(*r.cells[0].first_negative_day >= 10);
  CHECK(*r.cells[0].first_negative_day <= 40);
}

TEST_CASE("flat single path: margin constant after full discharge") {
  auto c = one_cell(100e6, {1e12, 0.0});
  c.n_paths = 1;
  c.collateral.sigma = 0.0;
  c.collateral.mu = 0.0;
  c.reserve.sigma = 0.0;
  c.reserve.mu = 0.0;
  const auto r = run_scenario(c);
  const auto& tr = r.cells[0].trace;
  REQUIRE_FALSE(tr.days.empty());
  CHECK(tr.days[0].debt_remaining == 0.0);
  // Selling at a flat price converts collateral into repaid debt one for one.
  for (const auto& d : tr.days) CHECK(d.margin == doctest::Approx(150e6 - 100e6 + 223e6));
  CHECK_FALSE(r.cells[0].first_negative_day);
}

TEST_CASE("progress callback does not change results") {
  auto c = ScenarioConfig::baseline();
  c.n_paths = 100;
  std::size_t calls = 0;
  RunOptions with_progress{3, [&](std::size_t done, std::size_t total) {
                             ++calls;
                             CHECK(done <= total);
                           }};
  const auto a = run_scenario(c, with_progress);
  const auto b = run_scenario(c);
  CHECK(calls == 12);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].path_index == b.cells[i].path_index);
    CHECK(a.cells[i].terminal_margin == b.cells[i].terminal_margin);
  }
}

TEST_CASE("1x1 heatmap equals the single run_scenario cell") {
  const auto c = one_cell(300e6, {20000, 0.01});
  const std::vector<double> debt{300e6}, l0{20000};
  const auto h = heatmap(c, debt, l0, 0.01, {4});
  const auto r = run_scenario(c);
  CHECK(h.at(0, 0) == r.cells[0].first_negative_day);
}

TEST_CASE("heatmap is monotone in debt and liquidity") {
  const std::vector<double> debt{100e6, 200e6, 300e6, 400e6}, l0{10000, 20000, 30000, 40000};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto c = ScenarioConfig::baseline();
    c.seed = seed;
    c.n_paths = 1000;
    const auto h = heatmap(c, debt, l0, 0.01, {4});
    for (std::size_t i = 0; i < debt.size(); ++i)
      for (std::size_t j = 0; j < l0.size(); ++j) {
        if (i > 0) CHECK(days_or_inf(h.at(i, j)) <= days_or_inf(h.at(i - 1, j)));
        if (j > 0) CHECK(days_or_inf(h.at(i, j)) >= days_or_inf(h.at(i, j - 1)));
      }
  }
}

TEST_CASE("correlation sweep") {
  auto c = one_cell(400e6, {30000, 0.01}, 5);
  c.rho_corr = 0.9;
  SUBCASE("single entry equals run_scenario") {
    const std::vector<double> rhos{0.9};
    const auto sweep = correlation_sweep(c, rhos);
    REQUIRE(sweep.size() == 1);
    const auto direct = run_scenario(c);
    CHECK(sweep[0].first == 0.9);
    CHECK(sweep[0].second.cells[0].path_index == direct.cells[0].path_index);
    CHECK(sweep[0].second.cells[0].terminal_margin == direct.cells[0].terminal_margin);
    CHECK(sweep[0].second.cells[0].first_negative_day == direct.cells[0].first_negative_day);
  }
  SUBCASE("negative and weak correlation protect the worst-case margin") {
    const std::vector<double> rhos{-0.9, 0.1, 0.9};
    const auto sweep = correlation_sweep(c, rhos);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].second.rho_corr == -0.9);
    const double neg = sweep[0].second.cells[0].min_terminal_margin;
    const double weak = sweep[1].second.cells[0].min_terminal_margin;
    const double strong = sweep[2].second.cells[0].min_terminal_margin;
    CHECK(neg > strong);
    CHECK(weak >= strong);
    CHECK(days_or_inf(sweep[0].second.cells[0].first_negative_day) >=
          days_or_inf(sweep[2].second.cells[0].first_negative_day));
  }
  SUBCASE("out-of-range correlation") {
    const std::vector<double> rhos{1.5};
    CHECK(code_of([&] { correlation_sweep(c, rhos); }) == ErrorCode::InvalidParams);
  }
}

TEST_CASE("thread count does not change the report") {
  auto c = ScenarioConfig::baseline();
  c.n_paths = 500;
  const auto a = run_scenario(c, {1});
  const auto b = run_scenario(c, {6});
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].path_index == b.cells[i].path_index);
    CHECK(a.cells[i].first_negative_day == b.cells[i].first_negative_day);
    CHECK(a.cells[i].terminal_margin == b.cells[i].terminal_margin);
    CHECK(a.cells[i].min_terminal_margin == b.cells[i].min_terminal_margin);
  }
}
