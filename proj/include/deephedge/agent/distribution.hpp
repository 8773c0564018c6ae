#pragma once

#include <cmath>

namespace dhedge::agent {

// action = a_max * tanh(z), z ~ Normal(mean, exp(log_std)).
struct SquashedGaussian {
  double mean = 0.0;
  double log_std = 0.0;
  double a_max = 1.0;

  struct Sample {
    double action = 0.0;
    double pre_squash = 0.0;
    double log_prob = 0.0;
  };

  double stddev() const { return std::exp(log_std); }

  // z = mean + stddev * noise.
  Sample sample(double noise) const;

  // Density of the squashed action, expressed through its pre-image z.
  double log_prob_at(double pre_squash) const;
  double log_prob(double action) const;

  double deterministic_action() const { return a_max * std::tanh(mean); }

  // Entropy of the pre-squash Normal.
  double entropy() const;
};

// log N(z; mean, exp(log_std))
double normal_log_density(double z, double mean, double log_std);

// log(1 - tanh(z)^2), stable for large |z|.
double log_one_minus_tanh_sq(double z);

}  // namespace dhedge::agent
