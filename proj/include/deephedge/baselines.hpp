#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "deephedge/hedging_env.hpp"

namespace dhedge::env {

enum class BaselineKind { kNoHedge, kBuyHold, kMomentum, kVolTarget, kVixBand, kVixVolTarget };

BaselineKind parse_baseline_kind(std::string_view name);
std::string_view to_string(BaselineKind kind);
std::vector<BaselineKind> all_baselines();

struct BaselineParams {
  int lookback = 21;         // momentum window, trading days
  double target_vol = 0.10;  // annualized
  double vix_median = 20.0;  // set from the training split via fit()
  double vix_band = 2.0;     // VIX points around the median treated as "near"
  double a_hi = 1.0;         // position when VIX is above the band
  double a_lo = 0.5;         // position when VIX is below the band

  // Sets vix_median from the training split.
  BaselineParams& fit(const data::FeaturePanel& train);
};

// All rules read only the current and earlier panel rows; missing inputs give a flat position.
std::unique_ptr<Policy> make_baseline(BaselineKind kind, const BaselineParams& params);

// Fixed position every step (buy_hold is constant_policy(1)).
std::unique_ptr<Policy> constant_policy(double position, std::string name = "constant");

}  // namespace dhedge::env
