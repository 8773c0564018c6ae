#include "deephedge/analytics/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "deephedge/analytics/metrics.hpp"
#include "deephedge/errors.hpp"
#include "deephedge/numeric.hpp"

namespace dhedge::analytics {

std::vector<Bucket> vix_tercile_buckets(std::span<const double> vix) {
  std::vector<double> sorted(vix.begin(), vix.end());
  for (std::size_t i = 0; i < vix.size(); ++i) {
    if (!std::isfinite(vix[i])) throw ValidationError("vix terciles: missing VIX at index " + std::to_string(i));
  }
  std::sort(sorted.begin(), sorted.end());
  const double q1 = sorted_quantile(sorted, 1.0 / 3.0);
  const double q2 = sorted_quantile(sorted, 2.0 / 3.0);
  std::vector<Bucket> out{{"vix_low", {}}, {"vix_mid", {}}, {"vix_high", {}}};
  for (std::size_t i = 0; i < vix.size(); ++i) {
    const std::size_t b = vix[i] <= q1 ? 0 : (vix[i] <= q2 ? 1 : 2);
    out[b].members.push_back(i);
  }
  return out;
}

std::vector<NamedPeriod> standard_periods() {
  return {
      {"GFC 08-09", Date{2008, 1, 1}, Date{2009, 12, 31}},
      {"Eurozone 10-12", Date{2010, 1, 1}, Date{2012, 12, 31}},
      {"Calm 17-19", Date{2017, 1, 1}, Date{2019, 12, 31}},
      {"COVID 20-21", Date{2020, 1, 1}, Date{2021, 12, 31}},
      {"Post COVID 22-23", Date{2022, 1, 1}, Date{2023, 12, 31}},
  };
}

std::vector<Bucket> period_buckets(std::span<const Date> dates, std::span<const NamedPeriod> periods) {
  std::vector<Bucket> out;
  for (const auto& p : periods) {
    Bucket b{p.name, {}};
    for (std::size_t i = 0; i < dates.size(); ++i) {
      if (dates[i] >= p.start && dates[i] <= p.end) b.members.push_back(i);
    }
    out.push_back(std::move(b));
  }
  return out;
}

namespace {

std::optional<double> bucket_sharpe(const std::vector<double>& values, const Bucket& b) {
  if (b.members.size() < 2) return std::nullopt;
  std::vector<double> sub;
  sub.reserve(b.members.size());
  for (auto i : b.members) sub.push_back(values.at(i));
  return annualized_sharpe(sub).value;
}

}  // namespace

RegimeTable regime_attribution(std::span<const NamedSeries> policies, const NamedSeries& benchmark,
                               std::span<const Bucket> buckets) {
  for (const auto& p : policies) {
    if (p.values.size() != benchmark.values.size()) {
      throw ValidationError("regime attribution: series '" + p.name + "' is not aligned with the benchmark");
    }
  }
  RegimeTable t;
  t.benchmark = benchmark.name;
  for (const auto& b : buckets) {
    const auto bench = bucket_sharpe(benchmark.values, b);
    for (const auto& p : policies) {
      RegimeCell c;
      c.bucket = b.name;
      c.policy = p.name;
      c.n = b.members.size();
      c.sharpe = bucket_sharpe(p.values, b);
      c.benchmark_sharpe = bench;
      if (c.sharpe && bench) c.delta_sharpe = *c.sharpe - *bench;
      t.cells.push_back(std::move(c));
    }
  }
  return t;
}

std::string regime_csv_header() { return "bucket,split,policy,n,sharpe,benchmark,benchmark_sharpe,delta_sharpe"; }

void write_regime_rows(std::ostream& out, const RegimeTable& table, const std::string& split) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
  for (const auto& c : table.cells) {
    out << c.bucket << ',' << split << ',' << c.policy << ',' << c.n << ',' << opt(c.sharpe) << ','
        << table.benchmark << ',' << opt(c.benchmark_sharpe) << ',' << opt(c.delta_sharpe) << '\n';
  }
}

}  // namespace dhedge::analytics
