#include "deephedge/agent/distribution.hpp"

#include <numbers>

namespace dhedge::agent {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)
}

double normal_log_density(double z, double mean, double log_std) {
  const double u = (z - mean) * std::exp(-log_std);
  return -0.5 * u * u - log_std - kHalfLog2Pi;
}

double log_one_minus_tanh_sq(double z) {
  // 1 - tanh^2 z = 4 / (e^z + e^-z)^2  =>  2 (log 2 - |z| - log1p(e^{-2|z|}))
  const double a = std::abs(z);
  return 2.0 * (std::numbers::ln2 - a - std::log1p(std::exp(-2.0 * a)));
}

SquashedGaussian::Sample SquashedGaussian::sample(double noise) const {
  Sample s;
  s.pre_squash = mean + stddev() * noise;
  s.action = a_max * std::tanh(s.pre_squash);
  if (std::abs(s.action) >= a_max) s.action = std::copysign(std::nextafter(a_max, 0.0), s.action);
  s.log_prob = log_prob_at(s.pre_squash);
  return s;
}

double SquashedGaussian::log_prob_at(double pre_squash) const {
  return normal_log_density(pre_squash, mean, log_std) - log_one_minus_tanh_sq(pre_squash) - std::log(a_max);
}

double SquashedGaussian::log_prob(double action) const { return log_prob_at(std::atanh(action / a_max)); }

double SquashedGaussian::entropy() const { return 0.5 + kHalfLog2Pi + log_std; }

}  // namespace dhedge::agent
