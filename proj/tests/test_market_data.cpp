#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "defistress/market_data.hpp"
#include "defistress/report.hpp"
#include "support.hpp"

using namespace defistress;
using namespace std::chrono;
using testing::code_of;

namespace {

std::string csv_of(const std::vector<double>& closes, sys_days start = sys_days{2020y / 1 / 1}) {
  std::string s = "date,open,high,low,close,volume\n";
  for (std::size_t i = 0; i < closes.size(); ++i) {
    const year_month_day d{start + days(i)};
    char buf[128];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u,%.17g,%.17g,%.17g,%.17g,1000\n",
                  int(d.year()), unsigned(d.month()), unsigned(d.day()), closes[i], closes[i],
                  closes[i], closes[i]);
    s += buf;
  }
  return s;
}

// Independent two-pass Jarque-Bera in long double.
double jb_oracle(const std::vector<double>& r) {
  const long double n = r.size();
  long double mean = 0;
  for (double x : r) mean += x;
  mean /= n;
  long double m2 = 0, m3 = 0, m4 = 0;
  for (double x : r) {
    const long double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const long double s = m3 / std::pow(m2, 1.5L);
  const long double k = m4 / (m2 * m2);
  return static_cast<double>(n / 6 * (s * s + (k - 3) * (k - 3) / 4));
}

}  // namespace

TEST_CASE("two-row file parses") {
  const auto s = parse_series_csv(csv_of({100, 110}));
  CHECK(s.size() == 2);
  CHECK(s.observations()[1].close == 110);
  CHECK(s.observations()[0].date == year_month_day{2020y / 1 / 1});
}

TEST_CASE("zero close is rejected at its row") {
  const std::string text =
      "date,open,high,low,close,volume\n"
      "2020-01-01,1,1,1,100,5\n"
      "2020-01-02,1,1,1,0,5\n";
  try {
    parse_series_csv(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
    CHECK(e.code() == ErrorCode::Parse);
  }
}

TEST_CASE("malformed inputs") {
  CHECK(code_of([] { parse_series_csv(""); }) == ErrorCode::EmptySeries);
  CHECK(code_of([] { parse_series_csv("date,open,high,low,close,volume\n"); }) ==
        ErrorCode::EmptySeries);
  CHECK(code_of([] { parse_series_csv("date,open,high,low,close,volume\n2020-01-01,1,1,1,x,1\n"); }) ==
        ErrorCode::Parse);
  CHECK(code_of([] { parse_series_csv("date,open,high,low,close,volume\n2020-13-01,1,1,1,1,1\n"); }) ==
        ErrorCode::Parse);
  CHECK(code_of([] { parse_series_csv("date,open,high,low,close,volume\n2020-01-01,1,1,1,1,-1\n"); }) ==
        ErrorCode::Parse);
  CHECK(code_of([] { parse_series_csv("when,open,high,low,close,volume\n2020-01-01,1,1,1,1,1\n"); }) ==
        ErrorCode::Parse);
  CHECK(code_of([] {
          parse_series_csv(
              "date,open,high,low,close,volume\n2020-01-02,1,1,1,1,1\n2020-01-01,1,1,1,1,1\n");
        }) == ErrorCode::NonMonotonicTime);
  CHECK(code_of([] {
          parse_series_csv(
              "date,open,high,low,close,volume\n2020-01-01,1,1,1,1,1\n2020-01-01,1,1,1,1,1\n");
        }) == ErrorCode::NonMonotonicTime);
  CHECK(code_of([] { load_series("/nonexistent/eth.csv"); }) == ErrorCode::Io);
}

TEST_CASE("blank lines and CRLF are tolerated") {
  const auto s = parse_series_csv(
      "date,open,high,low,close,volume\r\n2020-01-01,1,1,1,100,1\r\n\r\n2020-01-03,1,1,1,110,1\r\n");
  CHECK(s.size() == 2);
}

TEST_CASE("log returns") {
  const auto flat = log_returns(parse_series_csv(csv_of({100, 100})));
  REQUIRE(flat.size() == 1);
  CHECK(flat[0] == 0.0);

  const auto up = log_returns(parse_series_csv(csv_of({100, 110})));
  REQUIRE(up.size() == 1);
  CHECK(up[0] == doctest::Approx(0.09531).epsilon(1e-4));

  const auto two = log_returns(parse_series_csv(csv_of({100, 110, 99})));
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(std::log(1.1)).epsilon(1e-14));
  CHECK(two[1] == doctest::Approx(std::log(0.9)).epsilon(1e-14));

  CHECK(code_of([] { log_returns(parse_series_csv(csv_of({100}))); }) == ErrorCode::EmptySeries);
}

TEST_CASE("sample statistics") {
  const std::vector<double> zeros{0, 0, 0};
  const auto z = estimate_stats(zeros);
  CHECK(z.mu == 0.0);
  CHECK(z.sigma == 0.0);
  CHECK(z.n == 3);

  const std::vector<double> pm{0.1, -0.1};
  const auto s = estimate_stats(pm);
  CHECK(s.mu == doctest::Approx(0.0));
  CHECK(s.sigma == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
  CHECK(s.sigma == doctest::Approx(0.1414).epsilon(1e-3));

  const std::vector<double> one{0.1};
  CHECK(code_of([&] { estimate_stats(one); }) == ErrorCode::InsufficientData);
}

TEST_CASE("n equals observations minus one") {
  std::mt19937_64 gen(7);
  std::lognormal_distribution<double> px(5.0, 0.3);
  std::vector<double> closes(50);
  for (auto& c : closes) c = px(gen);
  const auto series = parse_series_csv(csv_of(closes));
  CHECK(estimate_stats(log_returns(series)).n == series.size() - 1);
}

TEST_CASE("cumulative returns reconstruct every close") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> step(0.0, 0.05);
  std::vector<double> closes{223.0};
  for (int i = 0; i < 767; ++i) closes.push_back(closes.back() * std::exp(step(gen)));
  const auto r = log_returns(parse_series_csv(csv_of(closes)));
  double log_p = std::log(closes[0]);
  for (std::size_t t = 0; t < r.size(); ++t) {
    log_p += r[t];
    CHECK(std::abs(std::exp(log_p) / closes[t + 1] - 1.0) < 1e-9);
  }
}

TEST_CASE("stats do not depend on where the window starts in time") {
  const std::vector<double> closes{100, 104, 97, 99.5, 120, 118};
  const auto a = estimate_stats(log_returns(parse_series_csv(csv_of(closes, sys_days{2018y / 1 / 1}))));
  const auto b = estimate_stats(log_returns(parse_series_csv(csv_of(closes, sys_days{2031y / 7 / 19}))));
  CHECK(a.mu == b.mu);
  CHECK(a.sigma == b.sigma);
  CHECK(a.n == b.n);
}

TEST_CASE("Jarque-Bera") {
  SUBCASE("matches an independent computation") {
    std::mt19937_64 gen(3);
    std::student_t_distribution<double> t(4.0);
    std::vector<double> r(2000);
    for (auto& x : r) x = 0.01 * t(gen);
    const auto jb = jarque_bera(r);
    CHECK(jb.statistic == doctest::Approx(jb_oracle(r)).epsilon(1e-9));
    CHECK(jb.p_value == doctest::Approx(std::exp(-jb.statistic / 2)));
    CHECK(jb.p_value < 0.05);
  }
  SUBCASE("invariant under positive affine maps") {
    std::mt19937_64 gen(5);
    std::exponential_distribution<double> e(3.0);
    std::vector<double> r(500), mapped(500);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = e(gen);
      mapped[i] = 2.5 * r[i] - 0.7;
    }
    CHECK(jarque_bera(mapped).statistic == doctest::Approx(jarque_bera(r).statistic).epsilon(1e-9));
  }
  SUBCASE("degenerate and short samples") {
    const std::vector<double> constant(10, 0.003);
    CHECK(code_of([&] { jarque_bera(constant); }) == ErrorCode::DegenerateSample);
    const std::vector<double> three{0.1, 0.2, 0.3};
    CHECK(code_of([&] { jarque_bera(three); }) == ErrorCode::InsufficientData);
  }
  SUBCASE("rarely rejects Gaussian samples") {
    int accepted = 0;
    constexpr int kSeeds = 200;
    for (int seed = 0; seed < kSeeds; ++seed) {
      std::mt19937_64 gen(1000 + seed);
      std::normal_distribution<double> n01;
      std::vector<double> r(10'000);
      for (auto& x : r) x = n01(gen);
      if (jarque_bera(r).p_value > 0.01) ++accepted;
    }
    CHECK(accepted >= 0.95 * kSeeds);
  }
}

TEST_CASE("stats JSON carries mu, sigma and n") {
  const auto json = stats_json({0.5, 0.25, 3});
  CHECK(json.find("\"mu\": 0.5") != std::string::npos);
  CHECK(json.find("\"sigma\": 0.25") != std::string::npos);
  CHECK(json.find("\"n\": 3") != std::string::npos);
}
