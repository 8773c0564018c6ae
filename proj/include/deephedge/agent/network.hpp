#pragma once

// Shared-trunk actor-critic MLP: two tanh hidden layers feeding a mean head,
// a value head, and a free scalar log standard deviation.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deephedge/numeric.hpp"

namespace dhedge::agent {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

struct TensorInfo {
  std::string name;
  std::vector<Eigen::Index> shape;
  Eigen::Index size() const;
};

struct PolicyParams {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // hidden x hidden
  Eigen::VectorXd b2;
  Eigen::VectorXd w_mu;
  double b_mu = 0.0;
  double log_std = 0.0;
  Eigen::VectorXd w_v;
  double b_v = 0.0;

  static PolicyParams zeros(Eigen::Index input_dim, Eigen::Index hidden);
  // Glorot-uniform trunk, near-zero heads.
  static PolicyParams init(Eigen::Index input_dim, Eigen::Index hidden, double init_log_std, Rng& rng);

  Eigen::Index input_dim() const { return w1.cols(); }
  Eigen::Index hidden() const { return w1.rows(); }

  // Tensors in flatten() order; matrices are flattened row-major.
  std::vector<TensorInfo> layout() const;
  Eigen::Index num_params() const;
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& flat);

  bool operator==(const PolicyParams& other) const;
};

struct PolicyOutput {
  double mean = 0.0;
  double log_std = 0.0;  // clamped to [kLogStdMin, kLogStdMax]
  double value = 0.0;
};

PolicyOutput forward(const PolicyParams& params, const Eigen::VectorXd& obs);

struct Batch {
  Eigen::MatrixXd obs;         // B x input_dim
  Eigen::VectorXd pre_squash;  // z with action = a_max * tanh(z)
  Eigen::VectorXd advantages;  // already normalized
  Eigen::VectorXd returns;
  double a_max = 1.0;
};

struct LossTerms {
  double total = 0.0;
  double actor = 0.0;
  double critic = 0.0;
  double entropy = 0.0;    // mean entropy of the pre-squash Normal
  double mean_log_prob = 0.0;
  double grad_norm = 0.0;  // global norm before clipping
  bool clipped = false;
  bool finite = true;
};

struct LossResult {
  LossTerms terms;
  PolicyParams grads;
};

// total = -mean(log_prob * A) - entropy_coef * mean(H) + 0.5 * mean((V - G)^2).
// Gradients are clipped to global norm grad_clip when grad_clip > 0.
LossResult loss_and_grads(const PolicyParams& params, const Batch& batch, double entropy_coef, double grad_clip);

// Loss only, for finite-difference checks.
double loss_value(const PolicyParams& params, const Batch& batch, double entropy_coef);

// Scales grads in place to norm `clip` when their global norm exceeds it; returns the pre-clip norm.
double clip_global_norm(PolicyParams& grads, double clip);

// In-place mean-0/std-1 normalization; a no-op returning false when std < 1e-8.
bool normalize_advantages(Eigen::VectorXd& adv);

}  // namespace dhedge::agent
