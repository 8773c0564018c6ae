#include "deephedge/agent/gae.hpp"

#include <string>

#include "deephedge/errors.hpp"

namespace dhedge::agent {

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values, double gamma, double lambda) {
  if (values.size() != rewards.size() + 1) {
    throw ValidationError("compute_gae: expected " + std::to_string(rewards.size() + 1) + " values, got " +
                          std::to_string(values.size()));
  }
  const std::size_t n = rewards.size();
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double delta = rewards[i] + gamma * values[i + 1] - values[i];
    running = delta + gamma * lambda * running;
    out.advantages[i] = running;
    out.returns[i] = running + values[i];
  }
  return out;
}

}  // namespace dhedge::agent
