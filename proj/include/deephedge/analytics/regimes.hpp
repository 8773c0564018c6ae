#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deephedge/date.hpp"

namespace dhedge::analytics {

struct Bucket {
  std::string name;
  std::vector<std::size_t> members;  // indices into the date-aligned series
};

// low / mid / high by the 1/3 and 2/3 quantiles of `vix` itself (the evaluated
// split only). Every index lands in exactly one bucket; missing VIX is an error.
std::vector<Bucket> vix_tercile_buckets(std::span<const double> vix);

struct NamedPeriod {
  std::string name;
  Date start;
  Date end;  // inclusive
};

// GFC 08-09, Eurozone 10-12, Calm 17-19, COVID 20-21, Post COVID 22-23.
std::vector<NamedPeriod> standard_periods();

std::vector<Bucket> period_buckets(std::span<const Date> dates, std::span<const NamedPeriod> periods);

struct NamedSeries {
  std::string name;
  std::vector<double> values;
};

struct RegimeCell {
  std::string bucket;
  std::string policy;
  std::size_t n = 0;
  std::optional<double> sharpe;
  std::optional<double> benchmark_sharpe;
  std::optional<double> delta_sharpe;  // policy - benchmark
};

struct RegimeTable {
  std::string benchmark;
  std::vector<RegimeCell> cells;  // bucket-major, policy order preserved
};

// Per-bucket annualized Sharpe of each policy and its difference to the
// benchmark series. Buckets with fewer than two members report missing values.
RegimeTable regime_attribution(std::span<const NamedSeries> policies, const NamedSeries& benchmark,
                               std::span<const Bucket> buckets);

// bucket,split,policy,n,sharpe,benchmark,benchmark_sharpe,delta_sharpe
std::string regime_csv_header();
void write_regime_rows(std::ostream& out, const RegimeTable& table, const std::string& split);

}  // namespace dhedge::analytics
