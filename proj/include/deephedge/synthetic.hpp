#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "deephedge/market_data.hpp"

namespace dhedge::data {

// Two-state (calm = 0, stress = 1) regime-switching market with an injected,
// partially predictable return component carried by the IV term-structure slope.
struct SynthConfig {
  std::size_t n_days = 1000;
  std::uint64_t seed = 7;
  Date start{2005, 1, 3};
  std::array<std::array<double, 2>, 2> transition{{{0.99, 0.01}, {0.04, 0.96}}};
  std::array<double, 2> drift{0.08, -0.10};  // annualized
  std::array<double, 2> vol{0.12, 0.35};     // annualized
  // Correlation between the latent signal at t and the t -> t+1 return shock.
  double signal_strength = 0.0;
  double signal_persistence = 0.95;  // AR(1) coefficient of the latent signal
  double rate_mean = 0.03;
  double rate_reversion = 0.5;
  double rate_vol = 0.01;
  double iv_missing_rate = 0.0;

  void validate() const;
};

struct SyntheticMarket {
  std::vector<RawDay> days;
  std::vector<int> regime;     // regime in force on each day
  std::vector<double> signal;  // latent signal, standard normal marginal
};

SyntheticMarket generate_synthetic_market(const SynthConfig& cfg);

// build_panel over the generated raw days.
FeaturePanel generate_synthetic(const SynthConfig& cfg);

}  // namespace dhedge::data
