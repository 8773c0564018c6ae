#pragma once

// Small fixtures shared by the unit and acceptance tests.

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "deephedge/market_data.hpp"
#include "deephedge/synthetic.hpp"

namespace dhedge::testutil {

// Consecutive business days from 2010-01-04 with hand-controlled columns.
inline std::vector<data::RawDay> flat_raw_days(std::size_t n, std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<data::RawDay> out;
  Date d{2010, 1, 4};
  double p = 100.0;
  for (std::size_t i = 0; i < n; ++i) {
    while (d.is_weekend()) d = d + 1;
    data::RawDay r;
    r.date = d;
    r.iv_30d = 0.2 + 0.01 * z(rng);
    r.iv_91d = 0.22 + 0.01 * z(rng);
    r.iv_25d_put = 0.25 + 0.01 * z(rng);
    r.iv_25d_call = 0.18 + 0.01 * z(rng);
    r.vix = 18.0 + z(rng);
    r.y10 = 0.03;
    r.spy_close = p;
    p *= 1.0 + 0.01 * z(rng);
    out.push_back(r);
    d = d + 1;
  }
  return out;
}

inline data::FeaturePanel small_synthetic(std::size_t n_days = 600, std::uint64_t seed = 7, double signal = 0.0) {
  data::SynthConfig cfg;
  cfg.n_days = n_days;
  cfg.seed = seed;
  cfg.signal_strength = signal;
  return data::generate_synthetic(cfg);
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dhedge_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace dhedge::testutil

#include "deephedge/hedging_env.hpp"

namespace dhedge::testutil {

// Panel with the given forward returns and smooth, fully present features.
inline data::FeaturePanel returns_panel(const std::vector<double>& ret_fwd) {
  data::FeaturePanel p;
  Date d{2012, 1, 2};
  double price = 100.0;
  for (std::size_t i = 0; i < ret_fwd.size(); ++i) {
    data::PanelRow r;
    r.date = d;
    int f = 0;
    for (auto m : data::kFeatureMembers) r.*m = std::sin(0.1 * static_cast<double>(i) + f++);
    r.vix = 20.0 + 5.0 * std::sin(0.05 * static_cast<double>(i));
    r.spy_close = price;
    r.ret_fwd = ret_fwd[i];
    price *= 1.0 + (std::isfinite(ret_fwd[i]) ? ret_fwd[i] : 0.0);
    p.rows.push_back(r);
    d = d + 1;
  }
  return p;
}

// Uniform requests in [-lo, lo] when sampling, 0 otherwise.
class UniformPolicy final : public env::Policy {
 public:
  explicit UniformPolicy(double bound) : bound_(bound) {}
  double act(const env::PolicyContext&, Rng* rng) const override {
    if (rng == nullptr) return 0.0;
    return std::uniform_real_distribution<double>(-bound_, bound_)(*rng);
  }
  std::string name() const override { return "uniform"; }

 private:
  double bound_;
};

}  // namespace dhedge::testutil
