#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dhedge::analytics {

// sqrt(gamma_0 / n), gamma_0 the 1/n sample variance.
double naive_se(std::span<const double> series);

// Bartlett-weighted HAC standard error of the mean:
// sigma^2 = g0 + 2 sum_{l=1..L} (1 - l/(L+1)) g_l, SE = sqrt(sigma^2 / n).
// Requires series.size() > lag.
double newey_west_se(std::span<const double> series, int lag = 21);

struct SharpeCI {
  double point = 0.0;
  double nw_se = 0.0;  // annualized Sharpe SE: NW SE of the mean / sample std * sqrt(252)
  double lo = 0.0;
  double hi = 0.0;
  int block_len = 21;
  int n_resamples = 1000;
  std::uint64_t seed = 0;
  double level = 0.95;
};

struct BootstrapOptions {
  int block_len = 21;
  int n_resamples = 1000;
  std::uint64_t seed = 0;
  double level = 0.95;
  int nw_lag = 21;
};

// One circular block-bootstrap resample of `series` (resample index `index`).
std::vector<double> circular_block_resample(std::span<const double> series, int block_len, std::uint64_t seed,
                                            std::uint64_t index);

// Percentile interval of the annualized Sharpe over circular block-bootstrap
// resamples. Resample i draws from make_rng(seed, i).
SharpeCI block_bootstrap_ci(std::span<const double> series, const BootstrapOptions& opts = {});

// {point, nw_se, lo, hi, block_len, n_resamples, seed}
std::string to_json(const SharpeCI& ci);

}  // namespace dhedge::analytics
