#include "deephedge/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "deephedge/errors.hpp"

namespace dhedge::data {

void SynthConfig::validate() const {
  if (n_days < 300) throw ConfigError("synth: n_days must be >= 300");
  for (const auto& row : transition) {
    if (row[0] < 0.0 || row[1] < 0.0 || std::abs(row[0] + row[1] - 1.0) > 1e-9) {
      throw ConfigError("synth: transition rows must be non-negative and sum to 1");
    }
  }
  if (!(vol[0] > 0.0) || !(vol[1] > 0.0)) throw ConfigError("synth: regime vols must be positive");
  if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) {
    throw ConfigError("synth: signal_strength must lie in [0, 1]");
  }
  if (!(signal_persistence >= 0.0 && signal_persistence < 1.0)) {
    throw ConfigError("synth: signal_persistence must lie in [0, 1)");
  }
  if (rate_reversion < 0.0 || rate_vol < 0.0) throw ConfigError("synth: rate parameters must be non-negative");
  if (!(iv_missing_rate >= 0.0 && iv_missing_rate < 1.0)) throw ConfigError("synth: iv_missing_rate must lie in [0, 1)");
}

SyntheticMarket generate_synthetic_market(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng = make_rng(cfg.seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  constexpr std::array<double, 2> kTermPremium{0.015, -0.03};
  constexpr std::array<double, 2> kSkewLevel{0.05, 0.09};
  constexpr double kSignalLoading = 0.01;  // ts_slope units per unit of latent signal
  const double dt = 1.0 / kTradingDaysPerYear;
  const double rho = cfg.signal_strength;
  const double phi = cfg.signal_persistence;

  SyntheticMarket m;
  m.days.reserve(cfg.n_days);
  m.regime.reserve(cfg.n_days);
  m.signal.reserve(cfg.n_days);

  Date d = cfg.start;
  int regime = 0;
  double x = normal(rng);
  double price = 100.0;
  double rate = cfg.rate_mean;
  for (std::size_t t = 0; t < cfg.n_days; ++t) {
    while (d.is_weekend()) d = d + 1;
    const double v = cfg.vol[regime];

    RawDay day;
    day.date = d;
    day.spy_close = price;
    day.iv_30d = std::max(0.01, 1.1 * v + 0.01 * normal(rng));
    day.iv_91d = std::max(0.01, day.iv_30d + kTermPremium[regime] + kSignalLoading * x + 0.002 * normal(rng));
    const double skew = kSkewLevel[regime];
    day.iv_25d_put = std::max(0.01, day.iv_30d + 0.5 * skew + 0.003 * normal(rng));
    day.iv_25d_call = std::max(0.01, day.iv_30d - 0.5 * skew + 0.003 * normal(rng));
    day.vix = std::max(5.0, 100.0 * v + normal(rng));
    day.y10 = rate;
    for (double RawDay::*iv : {&RawDay::iv_30d, &RawDay::iv_91d, &RawDay::iv_25d_put, &RawDay::iv_25d_call}) {
      if (unif(rng) < cfg.iv_missing_rate) day.*iv = kMissing;
    }
    m.days.push_back(day);
    m.regime.push_back(regime);
    m.signal.push_back(x);

    // Return from t to t+1: regime drift plus a shock correlated with today's signal.
    const double sd = v * std::sqrt(dt);
    const double shock = rho * x + std::sqrt(1.0 - rho * rho) * normal(rng);
    price *= std::exp(cfg.drift[regime] * dt - 0.5 * sd * sd + sd * shock);

    rate += cfg.rate_reversion * (cfg.rate_mean - rate) * dt + cfg.rate_vol * std::sqrt(dt) * normal(rng);
    regime = unif(rng) < cfg.transition[regime][1] ? 1 : 0;
    x = phi * x + std::sqrt(1.0 - phi * phi) * normal(rng);
    d = d + 1;
  }
  return m;
}

FeaturePanel generate_synthetic(const SynthConfig& cfg) {
  const auto market = generate_synthetic_market(cfg);
  return build_panel(market.days, PanelBuildSpec{});
}

}  // namespace dhedge::data
