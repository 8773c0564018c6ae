#include "deephedge/analytics/blend.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "deephedge/analytics/metrics.hpp"
#include "deephedge/errors.hpp"
#include "deephedge/numeric.hpp"

namespace dhedge::analytics {

namespace {

struct RollingRisk {
  std::vector<double> vol;
  std::vector<double> drawdown;  // depth, >= 0
};

RollingRisk rolling_risk(std::span<const double> r, std::size_t window) {
  RollingRisk out{std::vector<double>(r.size(), kMissing), std::vector<double>(r.size(), kMissing)};
  for (std::size_t i = window - 1; i < r.size(); ++i) {
    const auto w = r.subspan(i + 1 - window, window);
    out.vol[i] = sample_stddev(w) * std::sqrt(kTradingDaysPerYear);
    out.drawdown[i] = -max_drawdown(w);
  }
  return out;
}

}  // namespace

BlendReport blend(const DatedSeries& policy, const DatedSeries& spy, double weight, int rolling_window) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw ValidationError("blend: weight must lie in [0, 1]");
  if (policy.dates != spy.dates || policy.values.size() != policy.dates.size() ||
      spy.values.size() != spy.dates.size()) {
    throw ValidationError("blend: policy and SPY series are not date-aligned");
  }
  if (policy.values.size() < 2) throw ValidationError("blend: need at least 2 observations");
  if (rolling_window < 2) throw ValidationError("blend: rolling window must be >= 2");
  const std::size_t n = policy.values.size();

  BlendReport rep;
  rep.weight = weight;
  rep.dates = policy.dates;
  rep.returns.resize(n);
  rep.nav.resize(n);
  double nav = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.returns[i] = weight * policy.values[i] + (1.0 - weight) * spy.values[i];
    nav *= 1.0 + rep.returns[i];
    rep.nav[i] = nav;
  }

  rep.mean_bps = mean(rep.returns) * 1e4;
  rep.std_bps = sample_stddev(rep.returns) * 1e4;
  const auto s = annualized_sharpe(rep.returns);
  rep.sharpe = s.value;
  rep.sharpe_degenerate = s.degenerate;
  rep.ann_vol = sample_stddev(rep.returns) * std::sqrt(kTradingDaysPerYear);
  rep.cagr = nav > 0.0 ? std::pow(nav, kTradingDaysPerYear / static_cast<double>(n)) - 1.0 : -1.0;
  rep.max_drawdown = max_drawdown(rep.returns);

  const auto window = static_cast<std::size_t>(rolling_window);
  const auto rb = rolling_risk(rep.returns, window);
  const auto rp = rolling_risk(policy.values, window);
  const auto rs = rolling_risk(spy.values, window);
  rep.rolling.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.rolling[i] = {rep.dates[i], rb.vol[i] - rp.vol[i], rb.vol[i] - rs.vol[i], rb.drawdown[i] - rp.drawdown[i],
                      rb.drawdown[i] - rs.drawdown[i]};
  }

  double year_start_nav = 1.0;
  double prev_nav = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = rep.dates[i].year();
    if (rep.years.empty() || rep.years.back().year != y) {
      year_start_nav = prev_nav;
      rep.years.push_back({y, 0.0, 0.0, 0.0});
    }
    auto& ya = rep.years.back();
    const double scale = prev_nav / year_start_nav;
    ya.overlay += scale * weight * policy.values[i];
    ya.spy_leg += scale * (1.0 - weight) * spy.values[i];
    ya.total = rep.nav[i] / year_start_nav - 1.0;
    prev_nav = rep.nav[i];
  }
  return rep;
}

std::vector<BlendReport> blend_sweep(const DatedSeries& policy, const DatedSeries& spy,
                                     std::span<const double> weights, int rolling_window) {
  if (!std::is_sorted(weights.begin(), weights.end())) throw ValidationError("blend_sweep: weights must be sorted");
  std::vector<BlendReport> out;
  out.reserve(weights.size());
  for (double w : weights) out.push_back(blend(policy, spy, w, rolling_window));
  return out;
}

double min_variance_weight(std::span<const double> policy, std::span<const double> spy) {
  if (policy.size() != spy.size() || policy.size() < 2) throw ValidationError("min_variance_weight: bad inputs");
  const double mp = mean(policy);
  const double ms = mean(spy);
  double vp = 0.0, vs = 0.0, c = 0.0;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    vp += (policy[i] - mp) * (policy[i] - mp);
    vs += (spy[i] - ms) * (spy[i] - ms);
    c += (policy[i] - mp) * (spy[i] - ms);
  }
  const double denom = vp + vs - 2.0 * c;
  if (!(denom > 0.0)) return 0.5;
  return std::clamp((vs - c) / denom, 0.0, 1.0);
}

void write_frontier_csv(std::ostream& out, std::span<const BlendReport> reports) {
  out << "weight,ann_vol,cagr,sharpe\n";
  for (const auto& r : reports) {
    out << format_double(r.weight) << ',' << format_double(r.ann_vol) << ',' << format_double(r.cagr) << ','
        << format_double(r.sharpe) << '\n';
  }
}

void write_blend_summary_csv(std::ostream& out, std::span<const BlendReport> reports) {
  out << "weight,mean_bps,std_bps,sharpe,ann_vol,cagr,max_drawdown,steps\n";
  for (const auto& r : reports) {
    out << format_double(r.weight) << ',' << format_double(r.mean_bps) << ',' << format_double(r.std_bps) << ','
        << format_double(r.sharpe) << ',' << format_double(r.ann_vol) << ',' << format_double(r.cagr) << ','
        << format_double(r.max_drawdown) << ',' << r.returns.size() << '\n';
  }
}

void write_rolling_csv(std::ostream& out, const BlendReport& report) {
  out << "date,vol_vs_policy,vol_vs_spy,drawdown_vs_policy,drawdown_vs_spy\n";
  for (const auto& r : report.rolling) {
    out << r.date.to_string() << ',' << format_double(r.vol_vs_policy) << ',' << format_double(r.vol_vs_spy) << ','
        << format_double(r.drawdown_vs_policy) << ',' << format_double(r.drawdown_vs_spy) << '\n';
  }
}

void write_attribution_csv(std::ostream& out, const BlendReport& report) {
  out << "year,overlay,spy_leg,total\n";
  for (const auto& y : report.years) {
    out << y.year << ',' << format_double(y.overlay) << ',' << format_double(y.spy_leg) << ','
        << format_double(y.total) << '\n';
  }
}

}  // namespace dhedge::analytics
