#include "deephedge/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "deephedge/errors.hpp"

namespace dhedge::env {

namespace {

constexpr std::array<std::pair<BaselineKind, std::string_view>, 6> kNames = {{
    {BaselineKind::kNoHedge, "no_hedge"},
    {BaselineKind::kBuyHold, "buy_hold"},
    {BaselineKind::kMomentum, "momentum"},
    {BaselineKind::kVolTarget, "vol_target"},
    {BaselineKind::kVixBand, "vix_band"},
    {BaselineKind::kVixVolTarget, "vix_vol_target"},
}};

class ConstantPolicy final : public Policy {
 public:
  ConstantPolicy(double position, std::string name) : position_(position), name_(std::move(name)) {}
  double act(const PolicyContext&, Rng*) const override { return position_; }
  std::string name() const override { return name_; }

 private:
  double position_;
  std::string name_;
};

class MomentumPolicy final : public Policy {
 public:
  explicit MomentumPolicy(int lookback) : lookback_(static_cast<std::size_t>(lookback)) {}
  double act(const PolicyContext& ctx, Rng*) const override {
    if (ctx.row < lookback_) return 0.0;
    const double now = ctx.panel[ctx.row].spy_close;
    const double then = ctx.panel[ctx.row - lookback_].spy_close;
    if (!(now > 0.0) || !(then > 0.0)) return 0.0;
    const double r = now / then - 1.0;
    return r > 0.0 ? ctx.pos_limit : (r < 0.0 ? -ctx.pos_limit : 0.0);
  }
  std::string name() const override { return "momentum"; }

 private:
  std::size_t lookback_;
};

class VolTargetPolicy final : public Policy {
 public:
  explicit VolTargetPolicy(double target) : target_(target) {}
  double act(const PolicyContext& ctx, Rng*) const override {
    const double rv = ctx.panel[ctx.row].rv_21d;
    if (!std::isfinite(rv) || !(rv > 0.0)) return 0.0;
    return std::clamp(target_ / rv, 0.0, ctx.pos_limit);
  }
  std::string name() const override { return "vol_target"; }

 private:
  double target_;
};

class VixBandPolicy final : public Policy {
 public:
  explicit VixBandPolicy(const BaselineParams& p) : p_(p) {}
  double act(const PolicyContext& ctx, Rng*) const override {
    const double vix = ctx.panel[ctx.row].vix;
    if (!std::isfinite(vix)) return 0.0;
    double a = 0.0;
    if (vix > p_.vix_median + p_.vix_band) {
      a = p_.a_hi;
    } else if (vix < p_.vix_median - p_.vix_band) {
      a = p_.a_lo;
    }
    return std::clamp(a, -ctx.pos_limit, ctx.pos_limit);
  }
  std::string name() const override { return "vix_band"; }

 private:
  BaselineParams p_;
};

class VixVolTargetPolicy final : public Policy {
 public:
  explicit VixVolTargetPolicy(double target) : target_(target) {}
  double act(const PolicyContext& ctx, Rng*) const override {
    const double vix = ctx.panel[ctx.row].vix;
    if (!std::isfinite(vix) || !(vix > 0.0)) return 0.0;
    return std::clamp(target_ / (vix / 100.0), 0.0, ctx.pos_limit);
  }
  std::string name() const override { return "vix_vol_target"; }

 private:
  double target_;
};

}  // namespace

BaselineKind parse_baseline_kind(std::string_view name) {
  for (const auto& [kind, n] : kNames) {
    if (n == name) return kind;
  }
  throw ConfigError("unknown baseline kind '" + std::string(name) + "'");
}

std::string_view to_string(BaselineKind kind) {
  for (const auto& [k, n] : kNames) {
    if (k == kind) return n;
  }
  return "?";
}

std::vector<BaselineKind> all_baselines() {
  std::vector<BaselineKind> out;
  for (const auto& [k, n] : kNames) out.push_back(k);
  return out;
}

BaselineParams& BaselineParams::fit(const data::FeaturePanel& train) {
  std::vector<double> v;
  for (const auto& r : train.rows) {
    if (std::isfinite(r.vix)) v.push_back(r.vix);
  }
  if (!v.empty()) {
    std::sort(v.begin(), v.end());
    vix_median = sorted_quantile(v, 0.5);
  }
  return *this;
}

std::unique_ptr<Policy> make_baseline(BaselineKind kind, const BaselineParams& params) {
  switch (kind) {
    case BaselineKind::kNoHedge: return constant_policy(0.0, "no_hedge");
    case BaselineKind::kBuyHold: return constant_policy(1.0, "buy_hold");
    case BaselineKind::kMomentum: return std::make_unique<MomentumPolicy>(params.lookback);
    case BaselineKind::kVolTarget: return std::make_unique<VolTargetPolicy>(params.target_vol);
    case BaselineKind::kVixBand: return std::make_unique<VixBandPolicy>(params);
    case BaselineKind::kVixVolTarget: return std::make_unique<VixVolTargetPolicy>(params.target_vol);
  }
  throw ConfigError("unknown baseline kind");
}

std::unique_ptr<Policy> constant_policy(double position, std::string name) {
  return std::make_unique<ConstantPolicy>(position, std::move(name));
}

}  // namespace dhedge::env
