#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "deephedge/analytics/metrics.hpp"
#include "deephedge/analytics/regimes.hpp"
#include "deephedge/errors.hpp"

using namespace dhedge;
using namespace dhedge::analytics;

TEST(VixTerciles, PartitionIsCompleteAndOrdered) {
  std::mt19937_64 rng(4);
  std::lognormal_distribution<double> d(3.0, 0.3);
  std::vector<double> vix(301);
  for (double& v : vix) v = d(rng);
  const auto b = vix_tercile_buckets(vix);
  ASSERT_EQ(b.size(), 3u);
  std::vector<int> seen(vix.size(), 0);
  for (const auto& bucket : b) {
    for (auto i : bucket.members) ++seen[i];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  double max_low = 0.0, min_high = 1e9;
  for (auto i : b[0].members) max_low = std::max(max_low, vix[i]);
  for (auto i : b[2].members) min_high = std::min(min_high, vix[i]);
  EXPECT_LT(max_low, min_high);
  EXPECT_NEAR(static_cast<double>(b[0].members.size()), 100.0, 2.0);
  EXPECT_NEAR(static_cast<double>(b[2].members.size()), 100.0, 2.0);
}

TEST(VixTerciles, MissingVixIsAnError) {
  const std::vector<double> vix{10.0, kMissing, 20.0};
  EXPECT_THROW(vix_tercile_buckets(vix), ValidationError);
}

TEST(Periods, MembershipByInclusiveDates) {
  const auto periods = standard_periods();
  ASSERT_EQ(periods.size(), 5u);
  const std::vector<Date> dates{Date{2007, 12, 31}, Date{2008, 1, 1}, Date{2009, 12, 31}, Date{2015, 6, 1},
                                Date{2020, 3, 16}, Date{2023, 12, 31}};
  const auto b = period_buckets(dates, periods);
  EXPECT_EQ(b[0].members, (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(b[1].members.empty());
  EXPECT_TRUE(b[2].members.empty());
  EXPECT_EQ(b[3].members, (std::vector<std::size_t>{4}));
  EXPECT_EQ(b[4].members, (std::vector<std::size_t>{5}));
}

TEST(Attribution, PerBucketSharpeAndDelta) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> z(0.0, 1.0);
  NamedSeries p{"agent", std::vector<double>(120)};
  NamedSeries bench{"spy", std::vector<double>(120)};
  for (std::size_t i = 0; i < 120; ++i) {
    p.values[i] = 0.2 + z(rng);
    bench.values[i] = z(rng);
  }
  std::vector<Bucket> buckets{{"first", {}}, {"second", {}}, {"tiny", {7}}};
  for (std::size_t i = 0; i < 60; ++i) buckets[0].members.push_back(i);
  for (std::size_t i = 60; i < 120; ++i) buckets[1].members.push_back(i);
  const std::vector<NamedSeries> policies{p};
  const auto t = regime_attribution(policies, bench, buckets);
  ASSERT_EQ(t.cells.size(), 3u);
  const std::vector<double> first(p.values.begin(), p.values.begin() + 60);
  const std::vector<double> bfirst(bench.values.begin(), bench.values.begin() + 60);
  EXPECT_DOUBLE_EQ(*t.cells[0].sharpe, annualized_sharpe(first).value);
  EXPECT_DOUBLE_EQ(*t.cells[0].delta_sharpe, annualized_sharpe(first).value - annualized_sharpe(bfirst).value);
  EXPECT_FALSE(t.cells[2].sharpe);
  EXPECT_FALSE(t.cells[2].delta_sharpe);
  std::ostringstream os;
  write_regime_rows(os, t, "test");
  EXPECT_NE(os.str().find("tiny,test,agent,1,,spy,,"), std::string::npos);

  NamedSeries short_p{"x", std::vector<double>(5)};
  const std::vector<NamedSeries> bad{short_p};
  EXPECT_THROW(regime_attribution(bad, bench, buckets), ValidationError);
}
