#pragma once

#include <span>
#include <vector>

namespace dhedge::agent {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// values carries one bootstrap entry past the last reward (0 at a terminal state).
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values, double gamma, double lambda);

}  // namespace dhedge::agent
