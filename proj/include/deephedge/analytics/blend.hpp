#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "deephedge/date.hpp"

namespace dhedge::analytics {

struct DatedSeries {
  std::vector<Date> dates;
  std::vector<double> values;  // fractional returns
};

struct RollingDifferential {
  Date date;
  // Rolling vol (annualized) and rolling max-drawdown depth (positive fraction)
  // of the blend minus the same statistic of each leg; negative means less risk.
  // Missing until a full window is available.
  double vol_vs_policy = 0.0;
  double vol_vs_spy = 0.0;
  double drawdown_vs_policy = 0.0;
  double drawdown_vs_spy = 0.0;
};

// overlay + spy_leg == total up to rounding: each leg's contribution is its daily
// weighted return scaled by the blend NAV relative to the start of the year.
struct YearAttribution {
  int year = 0;
  double overlay = 0.0;
  double spy_leg = 0.0;
  double total = 0.0;
};

struct BlendReport {
  double weight = 0.0;
  std::vector<Date> dates;
  std::vector<double> returns;
  std::vector<double> nav;
  double mean_bps = 0.0;
  double std_bps = 0.0;
  double sharpe = 0.0;
  bool sharpe_degenerate = false;
  double ann_vol = 0.0;
  double cagr = 0.0;
  double max_drawdown = 0.0;
  std::vector<RollingDifferential> rolling;
  std::vector<YearAttribution> years;
};

// Daily return w * policy + (1 - w) * spy, compounded into a NAV starting at 1.
BlendReport blend(const DatedSeries& policy, const DatedSeries& spy, double weight, int rolling_window = 63);

std::vector<BlendReport> blend_sweep(const DatedSeries& policy, const DatedSeries& spy,
                                     std::span<const double> weights, int rolling_window = 63);

// Closed-form minimum-variance weight on the policy leg from sample moments, clamped to [0, 1].
double min_variance_weight(std::span<const double> policy, std::span<const double> spy);

void write_frontier_csv(std::ostream& out, std::span<const BlendReport> reports);
void write_blend_summary_csv(std::ostream& out, std::span<const BlendReport> reports);
void write_rolling_csv(std::ostream& out, const BlendReport& report);
void write_attribution_csv(std::ostream& out, const BlendReport& report);

}  // namespace dhedge::analytics
