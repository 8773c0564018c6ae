#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "deephedge/errors.hpp"
#include "deephedge/market_data.hpp"
#include "test_support.hpp"

using namespace dhedge;
using namespace dhedge::data;

namespace {

QuoteRecord quote(int tenor, double delta, double iv, double spread) {
  QuoteRecord q;
  q.date = Date{2020, 1, 2};
  q.tenor_days = tenor;
  q.delta = delta;
  q.iv_mid = iv;
  q.spread = spread;
  return q;
}

}  // namespace

TEST(SelectQuote, EqualDeltaDistancePrefersTighterSpread) {
  const std::vector<QuoteRecord> qs = {quote(30, 0.52, 0.20, 0.5), quote(30, 0.48, 0.21, 0.2)};
  const auto q = select_quote(qs, QuoteTarget{30, 0.5, 7, 0.05});
  ASSERT_TRUE(q);
  EXPECT_DOUBLE_EQ(q->spread, 0.2);
  EXPECT_DOUBLE_EQ(q->iv_mid, 0.21);
}

TEST(SelectQuote, SingleCandidateAndEmptyFeasibleSet) {
  const std::vector<QuoteRecord> one = {quote(28, 0.49, 0.3, 0.1)};
  ASSERT_TRUE(select_quote(one, QuoteTarget{30, 0.5, 7, 0.05}));
  const std::vector<QuoteRecord> far = {quote(30, 0.3, 0.3, 0.1), quote(30, 0.7, 0.3, 0.1)};
  EXPECT_FALSE(select_quote(far, QuoteTarget{30, 0.5, 7, 0.05}));
}

TEST(SelectQuote, TieOrderingFallsThroughTenorThenInputOrder) {
  const std::vector<QuoteRecord> qs = {quote(35, 0.5, 0.1, 0.2), quote(31, 0.5, 0.2, 0.2), quote(31, 0.5, 0.3, 0.2)};
  const auto q = select_quote(qs, QuoteTarget{30, 0.5, 7, 0.05});
  ASSERT_TRUE(q);
  EXPECT_DOUBLE_EQ(q->iv_mid, 0.2);
}

TEST(SelectQuote, RejectsNonPositiveTolerance) {
  const std::vector<QuoteRecord> qs = {quote(30, 0.5, 0.2, 0.1)};
  EXPECT_THROW(select_quote(qs, QuoteTarget{30, 0.5, 0, 0.05}), ValidationError);
}

TEST(ForwardFill, FillsShortGapOnly) {
  const std::vector<Date> d = {Date{2020, 1, 6}, Date{2020, 1, 7}, Date{2020, 1, 8}, Date{2020, 1, 14}};
  const std::vector<double> v = {1.0, kMissing, kMissing, kMissing};
  std::vector<bool> filled;
  const auto out = forward_fill_guarded(d, v, 3, &filled);
  EXPECT_EQ(out[1], 1.0);
  EXPECT_EQ(out[2], 1.0);
  EXPECT_TRUE(std::isnan(out[3]));  // 8 calendar days stale
  EXPECT_EQ(filled, (std::vector<bool>{false, true, true, false}));
}

TEST(ForwardFill, FiveDayGapStaysMissingAndPresentSeriesUnchanged) {
  const std::vector<Date> d = {Date{2020, 1, 1}, Date{2020, 1, 6}};
  EXPECT_TRUE(std::isnan(forward_fill_guarded(d, std::vector<double>{2.0, kMissing}, 3)[1]));
  const std::vector<double> full = {1.0, 2.0};
  EXPECT_EQ(forward_fill_guarded(d, full, 3), full);
}

TEST(ForwardFill, NeverCrossesLongGapsProperty) {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution missing(0.4);
  std::uniform_int_distribution<int> gap(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Date> dates;
    std::vector<double> vals;
    Date d{2015, 3, 2};
    for (int i = 0; i < 40; ++i) {
      d = d + gap(rng);
      dates.push_back(d);
      vals.push_back(missing(rng) ? kMissing : static_cast<double>(i));
    }
    const auto out = forward_fill_guarded(dates, vals, 3);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (!std::isnan(vals[i])) {
        EXPECT_EQ(out[i], vals[i]);
        continue;
      }
      // Oracle: last present index, if any, within 3 calendar days.
      std::optional<std::size_t> src;
      for (std::size_t k = i; k-- > 0;) {
        if (!std::isnan(vals[k])) {
          src = k;
          break;
        }
      }
      if (src && dates[i] - dates[*src] <= 3) {
        EXPECT_EQ(out[i], vals[*src]);
      } else {
        EXPECT_TRUE(std::isnan(out[i]));
      }
    }
  }
}

TEST(ForwardReturn, Examples) {
  auto r = compute_forward_return(std::vector<double>{100, 101});
  EXPECT_NEAR(r[0], 0.01, 1e-15);
  EXPECT_TRUE(std::isnan(r[1]));
  r = compute_forward_return(std::vector<double>{100, 100, 100});
  EXPECT_EQ(r[0], 0.0);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_TRUE(std::isnan(r[2]));
  r = compute_forward_return(std::vector<double>{100, 95});
  EXPECT_NEAR(r[0], -0.05, 1e-15);
  EXPECT_THROW(compute_forward_return(std::vector<double>{100, 0}), ValidationError);
}

TEST(RealizedVol, WarmupConstantAndAlternating) {
  const std::vector<double> constant(30, 0.001);
  const auto rv = realized_vol(constant, 21);
  for (int i = 0; i < 20; ++i) EXPECT_TRUE(std::isnan(rv[i]));
  EXPECT_NEAR(rv[20], 0.0, 1e-15);

  const double r = 0.02;
  const std::vector<double> alt = {r, -r, r, -r};
  const auto v2 = realized_vol(alt, 2);
  // sample std of {r, -r} = r * sqrt(2)
  EXPECT_NEAR(v2[1], std::sqrt(252.0) * r * std::sqrt(2.0), 1e-14);
  EXPECT_THROW(realized_vol(alt, 1), ValidationError);
}

TEST(BuildPanel, DerivedColumnsAndLastReturnMissing) {
  const auto raw = testutil::flat_raw_days(400);
  const auto panel = build_panel(raw);
  ASSERT_EQ(panel.size(), 400u);
  EXPECT_TRUE(std::isnan(panel.rows.back().ret_fwd));
  for (std::size_t i = 0; i < panel.size(); ++i) {
    const auto& row = panel[i];
    EXPECT_EQ(row.ts_slope, row.iv_91d - row.iv_30d);
    EXPECT_EQ(row.skew, row.iv_25d_put - row.iv_25d_call);
    if (i + 1 < panel.size()) EXPECT_EQ(row.ret_fwd, panel[i + 1].spy_close / row.spy_close - 1.0);
  }
  EXPECT_TRUE(std::isnan(panel[20].rv_21d));
  EXPECT_FALSE(std::isnan(panel[21].rv_21d));
  EXPECT_FALSE(std::isnan(panel[91].hvol_91d));
}

TEST(BuildPanel, ShortGapFilledAndFlagged) {
  auto raw = testutil::flat_raw_days(400);
  raw[100].iv_30d = kMissing;
  raw[200].iv_25d_put = -0.1;  // fails the quality filter, then filled from the prior day
  const auto panel = build_panel(raw);
  EXPECT_EQ(panel[100].iv_30d, panel[99].iv_30d);
  EXPECT_TRUE(panel[100].filled & kFilledIv30);
  EXPECT_EQ(panel[200].iv_25d_put, panel[199].iv_25d_put);
  EXPECT_TRUE(panel[200].filled & kFilledIvPut);
  EXPECT_EQ(panel[101].filled, 0);
}

TEST(BuildPanel, InsufficientData) {
  EXPECT_THROW(build_panel(std::vector<RawDay>{}), InsufficientDataError);
  EXPECT_THROW(build_panel(testutil::flat_raw_days(299)), InsufficientDataError);
}

TEST(BuildPanel, NoLookAheadFromFuturePrices) {
  auto raw = testutil::flat_raw_days(400);
  const auto base = build_panel(raw);
  const std::size_t t = 250;
  for (std::size_t i = t + 2; i < raw.size(); ++i) {
    raw[i].spy_close = 1e6 + static_cast<double>(i);
    raw[i].iv_30d = 9.0;
    raw[i].vix = 99.0;
  }
  const auto changed = build_panel(raw);
  for (std::size_t i = 0; i <= t; ++i) {
    for (auto m : kFeatureMembers) {
      const double a = base[i].*m, b = changed[i].*m;
      EXPECT_TRUE(a == b || (std::isnan(a) && std::isnan(b))) << "row " << i;
    }
    EXPECT_EQ(base[i].ret_fwd, changed[i].ret_fwd);
  }
}

TEST(SelectFeatures, PicksWingsAndAtmFromChains) {
  DailyQuotes day;
  day.date = Date{2020, 1, 2};
  day.spy_close = 300;
  day.quotes = {quote(30, 0.5, 0.20, 0.1), quote(91, 0.5, 0.22, 0.1), quote(30, -0.25, 0.26, 0.1),
                quote(30, 0.25, 0.17, 0.1), quote(30, 0.26, 0.99, 5.0)};
  const auto raw = select_features(std::vector<DailyQuotes>{day}, QuoteSelectionSpec{});
  ASSERT_EQ(raw.size(), 1u);
  EXPECT_EQ(raw[0].iv_30d, 0.20);
  EXPECT_EQ(raw[0].iv_91d, 0.22);
  EXPECT_EQ(raw[0].iv_25d_put, 0.26);
  EXPECT_EQ(raw[0].iv_25d_call, 0.17);
}

TEST(Splits, StandardSpecBoundaries) {
  data::SynthConfig cfg;
  cfg.n_days = 4900;  // 2005-01-03 into 2023
  const auto panel = generate_synthetic(cfg);
  const auto s = split_panel(panel, SplitSpec::standard());
  EXPECT_EQ(s.train.rows.back().date, (Date{2017, 12, 29}));
  EXPECT_EQ(s.valid.rows.front().date, (Date{2018, 1, 1}));
  EXPECT_EQ(s.valid.rows.back().date.year(), 2019);
  EXPECT_EQ(s.test.rows.front().date, (Date{2020, 1, 1}));
  EXPECT_EQ(s.train.size() + s.valid.size() + s.test.size(), panel.size());
}

TEST(Splits, BoundaryDateGoesLeftAndEmptySplitIsNamed) {
  const SplitSpec spec{Date{2020, 1, 2}, Date{2020, 6, 30}};
  EXPECT_EQ(classify(Date{2020, 1, 2}, spec), SplitName::kTrain);
  EXPECT_EQ(classify(Date{2020, 1, 3}, spec), SplitName::kValid);
  EXPECT_EQ(classify(Date{2020, 6, 30}, spec), SplitName::kValid);

  const auto panel = build_panel(testutil::flat_raw_days(400));
  const SplitSpec late{Date{2030, 1, 1}, Date{2031, 1, 1}};
  try {
    split_panel(panel, late);
    FAIL() << "expected an empty-split error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("valid"), std::string::npos);
  }
  EXPECT_THROW((SplitSpec{Date{2020, 1, 1}, Date{2019, 1, 1}}.validate()), ConfigError);
}

TEST(NormStats, ConstantTwoValueAndTrainOnly) {
  FeaturePanel p;
  for (int i = 0; i < 2; ++i) {
    PanelRow r;
    r.iv_30d = 5.0;
    r.iv_91d = i == 0 ? 0.0 : 2.0;
    p.rows.push_back(r);
  }
  const auto s = fit_norm_stats(p);
  EXPECT_EQ(s.mean[0], 5.0);
  EXPECT_EQ(s.stddev[0], 1.0);
  EXPECT_TRUE(s.degenerate[0]);
  EXPECT_EQ(s.mean[1], 1.0);
  EXPECT_NEAR(s.stddev[1], std::sqrt(2.0), 1e-15);
  EXPECT_FALSE(s.degenerate[1]);
}

TEST(NormStats, StandardNormalSamples) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0.0, 1.0);
  FeaturePanel p;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    PanelRow r;
    r.vix = z(rng);
    p.rows.push_back(r);
  }
  const auto s = fit_norm_stats(p);
  EXPECT_NEAR(s.mean[6], 0.0, 3.0 / std::sqrt(n));
  EXPECT_NEAR(s.stddev[6], 1.0, 3.0 / std::sqrt(n));
}

TEST(NormStats, PerturbingValidTestLeavesStatsUnchanged) {
  const auto panel = testutil::small_synthetic(1500);
  const SplitSpec spec{Date{2008, 12, 31}, Date{2009, 12, 31}};
  const auto a = fit_norm_stats(split_panel(panel, spec).train);
  FeaturePanel changed = panel;
  for (auto& r : changed.rows) {
    if (r.date > spec.train_end) r.vix += 50.0;
  }
  const auto b = fit_norm_stats(split_panel(changed, spec).train);
  EXPECT_EQ(a, b);
  EXPECT_EQ(fingerprint(a), fingerprint(b));
}

TEST(ApplyNorm, MeanMissingAndClip) {
  FeaturePanel p;
  PanelRow r;
  r.iv_30d = 0.2;
  r.iv_91d = kMissing;
  r.ts_slope = 0.2 + 10.0 * 0.05;
  r.vix = std::numeric_limits<double>::infinity();
  p.rows.push_back(r);
  NormStats s;
  s.mean.fill(0.2);
  s.stddev.fill(0.05);
  const auto z = apply_norm(p, s);
  EXPECT_EQ(z(0, 0), 0.0);
  EXPECT_EQ(z(0, 1), 0.0);
  EXPECT_EQ(z(0, 2), 5.0);
  EXPECT_EQ(z(0, 6), 0.0);
}
