#include "deephedge/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "deephedge/errors.hpp"

namespace dhedge::data {

std::optional<QuoteRecord> select_quote(std::span<const QuoteRecord> quotes, const QuoteTarget& target) {
  if (!(target.tenor_tol > 0.0) || !(target.delta_tol > 0.0)) {
    throw ValidationError("select_quote: tolerances must be positive");
  }
  const QuoteRecord* best = nullptr;
  std::tuple<double, double, double> best_key;
  for (const auto& q : quotes) {
    const double d_delta = std::abs(q.delta - target.delta);
    const double d_tenor = std::abs(static_cast<double>(q.tenor_days - target.tenor_days));
    if (d_delta > target.delta_tol || d_tenor > target.tenor_tol) continue;
    if (!std::isfinite(q.iv_mid) || !std::isfinite(q.spread)) continue;
    const auto key = std::make_tuple(d_delta, q.spread, d_tenor);
    // Strict comparison keeps the earliest quote among exact ties.
    if (best == nullptr || key < best_key) {
      best = &q;
      best_key = key;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::vector<double> forward_fill_guarded(std::span<const Date> dates, std::span<const double> values,
                                         int max_stale_days, std::vector<bool>* filled) {
  if (dates.size() != values.size()) {
    throw ValidationError("forward_fill_guarded: dates and values differ in length");
  }
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (!(dates[i - 1] < dates[i])) throw ValidationError("forward_fill_guarded: dates must be strictly increasing");
  }
  std::vector<double> out(values.begin(), values.end());
  if (filled != nullptr) filled->assign(values.size(), false);
  std::optional<std::size_t> last_present;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!is_missing(values[i])) {
      last_present = i;
      continue;
    }
    if (last_present && dates[i] - dates[*last_present] <= max_stale_days) {
      out[i] = values[*last_present];
      if (filled != nullptr) (*filled)[i] = true;
    }
  }
  return out;
}

std::vector<double> compute_forward_return(std::span<const double> prices) {
  std::vector<double> ret(prices.size(), kMissing);
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
      throw ValidationError("compute_forward_return: non-positive price at row " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i + 1 < prices.size(); ++i) ret[i] = prices[i + 1] / prices[i] - 1.0;
  return ret;
}

std::vector<double> realized_vol(std::span<const double> returns, int window) {
  if (window < 2) throw ValidationError("realized_vol: window must be >= 2");
  const auto w = static_cast<std::size_t>(window);
  std::vector<double> out(returns.size(), kMissing);
  for (std::size_t i = w - 1; i < returns.size(); ++i) {
    const auto slice = returns.subspan(i + 1 - w, w);
    if (std::any_of(slice.begin(), slice.end(), [](double r) { return !std::isfinite(r); })) continue;
    out[i] = sample_stddev(slice) * std::sqrt(kTradingDaysPerYear);
  }
  return out;
}

std::vector<Date> FeaturePanel::dates() const {
  std::vector<Date> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.date);
  return out;
}

std::vector<double> FeaturePanel::column(double PanelRow::*member) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.*member);
  return out;
}

namespace {

double quality_iv(double iv) { return (std::isfinite(iv) && iv >= 0.0) ? iv : kMissing; }

double difference(double a, double b) { return (is_missing(a) || is_missing(b)) ? kMissing : a - b; }

}  // namespace

FeaturePanel build_panel(std::span<const RawDay> raw, const PanelBuildSpec& spec) {
  if (raw.size() < spec.min_rows) {
    throw InsufficientDataError("build_panel: " + std::to_string(raw.size()) + " rows, need at least " +
                                std::to_string(spec.min_rows));
  }
  const std::size_t n = raw.size();
  std::vector<Date> dates(n);
  std::vector<double> prices(n);
  for (std::size_t i = 0; i < n; ++i) {
    dates[i] = raw[i].date;
    prices[i] = raw[i].spy_close;
    if (i > 0 && !(dates[i - 1] < dates[i])) {
      throw ValidationError("build_panel: dates not strictly increasing at " + dates[i].to_string());
    }
  }

  auto filled_iv = [&](double RawDay::*member, std::vector<bool>& flags) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = quality_iv(raw[i].*member);
    return forward_fill_guarded(dates, col, spec.max_stale_days, &flags);
  };
  std::vector<bool> f30, f91, fput, fcall;
  const auto iv30 = filled_iv(&RawDay::iv_30d, f30);
  const auto iv91 = filled_iv(&RawDay::iv_91d, f91);
  const auto ivput = filled_iv(&RawDay::iv_25d_put, fput);
  const auto ivcall = filled_iv(&RawDay::iv_25d_call, fcall);

  const auto ret_fwd = compute_forward_return(prices);
  std::vector<double> ret_back(n, kMissing);
  for (std::size_t i = 1; i < n; ++i) ret_back[i] = prices[i] / prices[i - 1] - 1.0;
  const auto rv21 = realized_vol(ret_back, 21);
  const auto hv30 = realized_vol(ret_back, 30);
  const auto hv91 = realized_vol(ret_back, 91);

  FeaturePanel panel;
  panel.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    PanelRow& row = panel.rows[i];
    row.date = dates[i];
    row.iv_30d = iv30[i];
    row.iv_91d = iv91[i];
    row.iv_25d_put = ivput[i];
    row.iv_25d_call = ivcall[i];
    row.ts_slope = difference(row.iv_91d, row.iv_30d);
    row.skew = difference(row.iv_25d_put, row.iv_25d_call);
    row.vix = (std::isfinite(raw[i].vix) && raw[i].vix > 0.0) ? raw[i].vix : kMissing;
    row.y10 = std::isfinite(raw[i].y10) ? raw[i].y10 : kMissing;
    row.rv_21d = rv21[i];
    row.hvol_30d = hv30[i];
    row.hvol_91d = hv91[i];
    row.spy_close = prices[i];
    row.ret_fwd = ret_fwd[i];
    row.filled = static_cast<std::uint8_t>((f30[i] ? kFilledIv30 : 0) | (f91[i] ? kFilledIv91 : 0) |
                                           (fput[i] ? kFilledIvPut : 0) | (fcall[i] ? kFilledIvCall : 0));
  }
  return panel;
}

std::vector<RawDay> select_features(std::span<const DailyQuotes> chains, const QuoteSelectionSpec& spec) {
  std::vector<RawDay> out;
  out.reserve(chains.size());
  for (const auto& day : chains) {
    std::vector<QuoteRecord> liquid;
    for (const auto& q : day.quotes) {
      if (q.spread >= 0.0 && q.spread <= spec.max_spread && q.iv_mid >= 0.0) liquid.push_back(q);
    }
    auto pick = [&](int tenor, double delta) {
      const auto q = select_quote(liquid, QuoteTarget{tenor, delta, spec.tenor_tol, spec.delta_tol});
      return q ? q->iv_mid : kMissing;
    };
    RawDay r;
    r.date = day.date;
    r.iv_30d = pick(spec.short_tenor, spec.atm_delta);
    r.iv_91d = pick(spec.long_tenor, spec.atm_delta);
    r.iv_25d_put = pick(spec.short_tenor, -spec.wing_delta);
    r.iv_25d_call = pick(spec.short_tenor, spec.wing_delta);
    r.vix = day.vix;
    r.y10 = day.y10;
    r.spy_close = day.spy_close;
    out.push_back(r);
  }
  return out;
}

void SplitSpec::validate() const {
  if (!(train_end < valid_end)) {
    throw ConfigError("split: train_end " + train_end.to_string() + " must precede valid_end " +
                      valid_end.to_string());
  }
}

SplitSpec SplitSpec::standard() { return SplitSpec{Date{2017, 12, 31}, Date{2019, 12, 31}}; }

std::string_view to_string(SplitName s) {
  switch (s) {
    case SplitName::kTrain: return "train";
    case SplitName::kValid: return "valid";
    case SplitName::kTest: return "test";
  }
  return "?";
}

SplitName parse_split_name(std::string_view s) {
  if (s == "train") return SplitName::kTrain;
  if (s == "valid") return SplitName::kValid;
  if (s == "test") return SplitName::kTest;
  throw ConfigError("unknown split '" + std::string(s) + "'");
}

SplitName classify(Date d, const SplitSpec& spec) {
  if (d <= spec.train_end) return SplitName::kTrain;
  if (d <= spec.valid_end) return SplitName::kValid;
  return SplitName::kTest;
}

const FeaturePanel& PanelSplits::get(SplitName s) const {
  switch (s) {
    case SplitName::kTrain: return train;
    case SplitName::kValid: return valid;
    case SplitName::kTest: return test;
  }
  return test;
}

PanelSplits split_panel(const FeaturePanel& panel, const SplitSpec& spec) {
  spec.validate();
  PanelSplits out;
  for (const auto& row : panel.rows) {
    switch (classify(row.date, spec)) {
      case SplitName::kTrain: out.train.rows.push_back(row); break;
      case SplitName::kValid: out.valid.rows.push_back(row); break;
      case SplitName::kTest: out.test.rows.push_back(row); break;
    }
  }
  for (auto s : {SplitName::kTrain, SplitName::kValid, SplitName::kTest}) {
    if (out.get(s).empty()) throw ValidationError("split_panel: empty " + std::string(to_string(s)) + " split");
  }
  return out;
}

NormStats fit_norm_stats(const FeaturePanel& train, double clip_bound) {
  if (train.empty()) throw ValidationError("fit_norm_stats: empty training split");
  if (!(clip_bound > 0.0)) throw ConfigError("fit_norm_stats: clip_bound must be positive");
  NormStats stats;
  stats.clip_bound = clip_bound;
  std::vector<double> present;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    present.clear();
    for (const auto& row : train.rows) {
      const double x = row.*kFeatureMembers[f];
      if (std::isfinite(x)) present.push_back(x);
    }
    stats.mean[f] = present.empty() ? 0.0 : mean(present);
    const double sd = sample_stddev(present);
    stats.degenerate[f] = !(sd > 0.0);
    stats.stddev[f] = stats.degenerate[f] ? 1.0 : sd;
  }
  return stats;
}

std::string fingerprint(const NormStats& stats) {
  std::string canon = "features:";
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    canon += std::string(kFeatureNames[f]) + "|" + format_double(stats.mean[f]) + "|" +
             format_double(stats.stddev[f]) + "|" + (stats.degenerate[f] ? "1" : "0") + ";";
  }
  canon += "clip:" + format_double(stats.clip_bound);
  return hex64(fnv1a64(canon));
}

Eigen::MatrixXd apply_norm(const FeaturePanel& panel, const NormStats& stats) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(panel.size()), static_cast<Eigen::Index>(kNumFeatures));
  for (std::size_t i = 0; i < panel.size(); ++i) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      const double x = panel.rows[i].*kFeatureMembers[f];
      double v = 0.0;
      if (std::isfinite(x)) {
        v = finite_or_zero(std::clamp((x - stats.mean[f]) / stats.stddev[f], -stats.clip_bound, stats.clip_bound));
      }
      z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = v;
    }
  }
  return z;
}

}  // namespace dhedge::data
