#include "defistress/market_data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "defistress/error.hpp"

namespace defistress {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::MissingPrice: return "MissingPrice";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::InsufficientDepth: return "InsufficientDepth";
    case ErrorCode::InsufficientPoolLiquidity: return "InsufficientPoolLiquidity";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Schema: return "SchemaError";
    case ErrorCode::Numeric: return "NumericError";
  }
  return "Unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_number(std::string_view field, std::size_t row, const char* name) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw ParseError(row, std::string("malformed ") + name + " '" + std::string(field) + "'");
  return value;
}

int parse_int(std::string_view field, std::size_t row) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(row, "malformed date");
  return value;
}

std::chrono::year_month_day parse_date(std::string_view field, std::size_t row) {
  // YYYY-MM-DD, optionally followed by a time component which is ignored.
  if (field.size() > 10 && (field[10] == 'T' || field[10] == ' ')) field = field.substr(0, 10);
  if (field.size() != 10 || field[4] != '-' || field[7] != '-')
    throw ParseError(row, "malformed date '" + std::string(field) + "'");
  const std::chrono::year_month_day ymd{
      std::chrono::year{parse_int(field.substr(0, 4), row)},
      std::chrono::month{static_cast<unsigned>(parse_int(field.substr(5, 2), row))},
      std::chrono::day{static_cast<unsigned>(parse_int(field.substr(8, 2), row))}};
  if (!ymd.ok()) throw ParseError(row, "invalid calendar date '" + std::string(field) + "'");
  return ymd;
}

constexpr std::string_view kColumns[] = {"date", "open", "high", "low", "close", "volume"};

}  // namespace

PriceSeries::PriceSeries(std::vector<Ohlcv> observations) : obs_(std::move(observations)) {
  if (obs_.empty()) throw Error(ErrorCode::EmptySeries, "series has no observations");
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    const auto& o = obs_[i];
    if (!(o.open > 0 && o.high > 0 && o.low > 0 && o.close > 0))
      throw ParseError(i + 1, "prices must be positive");
    if (!(o.volume >= 0)) throw ParseError(i + 1, "volume must be non-negative");
    if (i > 0 && std::chrono::sys_days{o.date} <= std::chrono::sys_days{obs_[i - 1].date})
      throw Error(ErrorCode::NonMonotonicTime,
                  "row " + std::to_string(i + 1) + ": timestamps must be strictly increasing");
  }
}

std::vector<double> PriceSeries::closes() const {
  std::vector<double> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(o.close);
  return out;
}

PriceSeries parse_series_csv(std::string_view text) {
  std::vector<Ohlcv> rows;
  bool header_seen = false;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() != std::size(kColumns))
        throw ParseError(0, "expected header date,open,high,low,close,volume");
      for (std::size_t i = 0; i < fields.size(); ++i) {
        std::string lower(fields[i]);
        for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lower != kColumns[i])
          throw ParseError(0, "unexpected column '" + std::string(fields[i]) + "'");
      }
      header_seen = true;
      continue;
    }

    ++row;
    if (fields.size() != std::size(kColumns))
      throw ParseError(row, "expected 6 fields, got " + std::to_string(fields.size()));
    Ohlcv o;
    o.date = parse_date(fields[0], row);
    o.open = parse_number(fields[1], row, "open");
    o.high = parse_number(fields[2], row, "high");
    o.low = parse_number(fields[3], row, "low");
    o.close = parse_number(fields[4], row, "close");
    o.volume = parse_number(fields[5], row, "volume");
    if (o.close <= 0) throw ParseError(row, "close price must be positive");
    rows.push_back(o);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptySeries, "no valid rows");
  return PriceSeries(std::move(rows));
}

PriceSeries load_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_series_csv(buf.str());
}

std::vector<double> log_returns(const PriceSeries& series) {
  if (series.size() < 2)
    throw Error(ErrorCode::EmptySeries, "at least 2 observations are needed for returns");
  const auto obs = series.observations();
  std::vector<double> out;
  out.reserve(obs.size() - 1);
  for (std::size_t t = 0; t + 1 < obs.size(); ++t)
    out.push_back(std::log(obs[t + 1].close / obs[t].close));
  return out;
}

ReturnStats estimate_stats(std::span<const double> returns) {
  if (returns.size() < 2)
    throw Error(ErrorCode::InsufficientData, "at least 2 returns are needed");
  const double n = static_cast<double>(returns.size());
  double sum = 0.0;
  for (double r : returns) sum += r;
  const double mean = sum / n;
  double ss = 0.0;
  for (double r : returns) ss += (r - mean) * (r - mean);
  return {mean, std::sqrt(ss / (n - 1.0)), returns.size()};
}

JarqueBera jarque_bera(std::span<const double> returns) {
  if (returns.size() < 4)
    throw Error(ErrorCode::InsufficientData, "at least 4 returns are needed");
  const double n = static_cast<double>(returns.size());
  double sum = 0.0;
  for (double r : returns) sum += r;
  const double mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double r : returns) {
    const double d = r - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  // Relative threshold: a constant series leaves only rounding noise in m2.
  if (!(m2 > 1e-28 * std::max(1.0, mean * mean)))
    throw Error(ErrorCode::DegenerateSample, "zero variance");
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  const double stat = n / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
  return {stat, std::exp(-stat / 2.0)};
}

}  // namespace defistress
