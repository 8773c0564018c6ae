#pragma once

// Central finite-difference oracle for the actor-critic loss.

#include <algorithm>
#include <cmath>
#include <random>

#include "deephedge/agent/network.hpp"

namespace dhedge::testutil {

struct GradCheckResult {
  double worst_excess = 0.0;  // max over params of |a - n| / (rtol * max(|a|, |n|, floor)); <= 1 passes
  Eigen::Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
};

inline agent::Batch random_batch(Eigen::Index n, Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  agent::Batch b;
  b.obs.resize(n, dim);
  b.pre_squash.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) b.obs(i, j) = z(rng);
    b.pre_squash[i] = 1.5 * z(rng);
    b.advantages[i] = z(rng);
    b.returns[i] = z(rng);
  }
  b.a_max = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
  return b;
}

inline GradCheckResult gradient_check(const agent::PolicyParams& params, const agent::Batch& batch,
                                      double entropy_coef, double rtol = 1e-4, double floor = 1e-3) {
  const auto analytic = agent::loss_and_grads(params, batch, entropy_coef, 0.0).grads.flatten();
  const Eigen::VectorXd theta = params.flatten();
  agent::PolicyParams probe = params;
  GradCheckResult out;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    const double h = 1e-5 * std::max(1.0, std::abs(theta[k]));
    Eigen::VectorXd plus = theta, minus = theta;
    plus[k] += h;
    minus[k] -= h;
    probe.unflatten(plus);
    const double lp = agent::loss_value(probe, batch, entropy_coef);
    probe.unflatten(minus);
    const double lm = agent::loss_value(probe, batch, entropy_coef);
    const double numeric = (lp - lm) / (2.0 * h);
    const double scale = rtol * std::max({std::abs(analytic[k]), std::abs(numeric), floor});
    const double excess = std::abs(analytic[k] - numeric) / scale;
    if (excess > out.worst_excess) out = GradCheckResult{excess, k, analytic[k], numeric};
  }
  return out;
}

}  // namespace dhedge::testutil
