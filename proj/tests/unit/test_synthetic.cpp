#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "deephedge/errors.hpp"
#include "deephedge/panel_io.hpp"
#include "deephedge/synthetic.hpp"
#include "test_support.hpp"

using namespace dhedge;
using namespace dhedge::data;

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) continue;
    ma += a[i];
    mb += b[i];
    ++n;
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) continue;
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST(Synthetic, ThousandDaysAndLastReturnMissing) {
  const auto p = testutil::small_synthetic(1000);
  ASSERT_EQ(p.size(), 1000u);
  EXPECT_TRUE(std::isnan(p.rows.back().ret_fwd));
  EXPECT_EQ(p[0].date, (Date{2005, 1, 3}));
  for (const auto& r : p.rows) EXPECT_FALSE(r.date.is_weekend());
}

TEST(Synthetic, SameSeedBitIdentical) {
  std::stringstream a, b;
  write_panel_csv(a, testutil::small_synthetic(800, 99, 0.3));
  write_panel_csv(b, testutil::small_synthetic(800, 99, 0.3));
  EXPECT_EQ(a.str(), b.str());
  std::stringstream c;
  write_panel_csv(c, testutil::small_synthetic(800, 100, 0.3));
  EXPECT_NE(a.str(), c.str());
}

TEST(Synthetic, NoSignalMeansNoFeatureReturnCorrelation) {
  const auto p = testutil::small_synthetic(6000, 21, 0.0);
  const double n = static_cast<double>(p.size());
  const auto ret = p.column(&PanelRow::ret_fwd);
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    EXPECT_LT(std::abs(correlation(p.column(kFeatureMembers[f]), ret)), 3.0 / std::sqrt(n)) << kFeatureNames[f];
  }
}

TEST(Synthetic, SignalIsVisibleThroughTermStructure) {
  const auto p = testutil::small_synthetic(6000, 21, 0.5);
  EXPECT_GT(correlation(p.column(&PanelRow::ts_slope), p.column(&PanelRow::ret_fwd)), 0.1);
}

TEST(Synthetic, StressRegimeIsMoreVolatile) {
  SynthConfig cfg;
  cfg.n_days = 6000;
  cfg.seed = 4;
  const auto m = generate_synthetic_market(cfg);
  double s[2] = {0, 0}, ss[2] = {0, 0};
  double n[2] = {0, 0};
  for (std::size_t t = 0; t + 1 < m.days.size(); ++t) {
    const double r = m.days[t + 1].spy_close / m.days[t].spy_close - 1.0;
    const int k = m.regime[t];
    s[k] += r;
    ss[k] += r * r;
    n[k] += 1;
  }
  ASSERT_GT(n[1], 100);
  const double v0 = ss[0] / n[0] - (s[0] / n[0]) * (s[0] / n[0]);
  const double v1 = ss[1] / n[1] - (s[1] / n[1]) * (s[1] / n[1]);
  EXPECT_GT(v1, v0);
}

TEST(Synthetic, InvalidConfigs) {
  SynthConfig c;
  c.n_days = 100;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
  c = SynthConfig{};
  c.transition[0] = {0.5, 0.6};
  EXPECT_THROW(generate_synthetic(c), ConfigError);
  c = SynthConfig{};
  c.vol[1] = 0.0;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
  c = SynthConfig{};
  c.signal_strength = 1.5;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
}
