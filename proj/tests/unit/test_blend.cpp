#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "deephedge/analytics/blend.hpp"
#include "deephedge/analytics/metrics.hpp"
#include "deephedge/errors.hpp"
#include "oracles.hpp"

using namespace dhedge;
using namespace dhedge::analytics;

namespace {

// Legs with correlation rho built from shared normal shocks.
std::pair<DatedSeries, DatedSeries> legs(std::size_t n, double rho, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  DatedSeries p, s;
  Date d{2015, 1, 2};
  for (std::size_t i = 0; i < n; ++i) {
    while (d.is_weekend()) d = d + 1;
    const double a = z(rng);
    const double b = rho * a + std::sqrt(1.0 - rho * rho) * z(rng);
    p.dates.push_back(d);
    s.dates.push_back(d);
    p.values.push_back(0.0003 + 0.006 * a);
    s.values.push_back(0.0004 + 0.012 * b);
    d = d + 1;
  }
  return {p, s};
}

}  // namespace

TEST(Blend, EndpointsReproducePureLegs) {
  const auto [p, s] = legs(700, -0.4, 1);
  const auto b0 = blend(p, s, 0.0);
  const auto b1 = blend(p, s, 1.0);
  EXPECT_EQ(b0.returns, s.values);
  EXPECT_EQ(b1.returns, p.values);
  EXPECT_EQ(b0.sharpe, annualized_sharpe(s.values).value);
  EXPECT_EQ(b1.sharpe, annualized_sharpe(p.values).value);
  EXPECT_EQ(b0.max_drawdown, max_drawdown(s.values));
  EXPECT_EQ(b1.max_drawdown, max_drawdown(p.values));
  EXPECT_EQ(b0.ann_vol, sample_stddev(s.values) * std::sqrt(252.0));
  EXPECT_EQ(b1.mean_bps, mean(p.values) * 1e4);
  for (const auto& r : b1.rolling) {
    if (std::isnan(r.vol_vs_policy)) continue;
    EXPECT_EQ(r.vol_vs_policy, 0.0);
    EXPECT_EQ(r.drawdown_vs_policy, 0.0);
  }
}

TEST(Blend, MinimumVolatilityMatchesClosedForm) {
  const auto [p, s] = legs(2000, -0.6, 2);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.1 * i);
  const auto reports = blend_sweep(p, s, grid);
  ASSERT_EQ(reports.size(), 11u);
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].ann_vol < reports[best].ann_vol) best = i;
  }
  // Closed form from the oracle moments.
  const double vp = testutil::sample_variance(p.values);
  const double vs = testutil::sample_variance(s.values);
  const double c = testutil::sample_covariance(p.values, s.values);
  const double w = std::clamp((vs - c) / (vp + vs - 2 * c), 0.0, 1.0);
  EXPECT_NEAR(min_variance_weight(p.values, s.values), w, 1e-12);
  EXPECT_LE(std::abs(grid[best] - w), 0.1 + 1e-12);
}

TEST(Blend, YearAttributionAddsUp) {
  const auto [p, s] = legs(800, 0.2, 3);
  const auto b = blend(p, s, 0.35);
  ASSERT_GE(b.years.size(), 3u);
  for (const auto& y : b.years) EXPECT_NEAR(y.overlay + y.spy_leg, y.total, 1e-12) << y.year;
  double nav = 1.0;
  for (const auto& y : b.years) nav *= 1.0 + y.total;
  EXPECT_NEAR(nav, b.nav.back(), 1e-12);
}

TEST(Blend, RollingDifferentialsMissingUntilWindowFull) {
  const auto [p, s] = legs(100, 0.0, 4);
  const auto b = blend(p, s, 0.5, 20);
  for (std::size_t i = 0; i < 19; ++i) EXPECT_TRUE(std::isnan(b.rolling[i].vol_vs_spy));
  EXPECT_FALSE(std::isnan(b.rolling[19].vol_vs_spy));
  std::ostringstream os;
  write_rolling_csv(os, b);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
}

TEST(Blend, RejectsMisalignedOrBadWeights) {
  auto [p, s] = legs(50, 0.0, 5);
  EXPECT_THROW(blend(p, s, 1.5), ValidationError);
  s.dates.back() = s.dates.back() + 1;
  EXPECT_THROW(blend(p, s, 0.5), ValidationError);
}
