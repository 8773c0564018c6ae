#include "deephedge/agent/network.hpp"

#include <algorithm>
#include <cmath>

#include "deephedge/agent/distribution.hpp"
#include "deephedge/errors.hpp"

namespace dhedge::agent {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

bool log_std_inside(double ls) { return ls > kLogStdMin && ls < kLogStdMax; }

struct Activations {
  Eigen::MatrixXd h1;  // B x H
  Eigen::MatrixXd h2;  // B x H
  Eigen::VectorXd mu;
  Eigen::VectorXd value;
};

Activations forward_batch(const PolicyParams& p, const Eigen::MatrixXd& x) {
  if (x.cols() != p.input_dim()) {
    throw ValidationError("batch width " + std::to_string(x.cols()) + " does not match network input " +
                          std::to_string(p.input_dim()));
  }
  Activations a;
  a.h1 = ((x * p.w1.transpose()).rowwise() + p.b1.transpose()).array().tanh().matrix();
  a.h2 = ((a.h1 * p.w2.transpose()).rowwise() + p.b2.transpose()).array().tanh().matrix();
  a.mu = (a.h2 * p.w_mu).array() + p.b_mu;
  a.value = (a.h2 * p.w_v).array() + p.b_v;
  return a;
}

template <typename Params, typename Fn>
void for_each_tensor(Params& p, Fn&& fn) {
  fn(p.w1.data(), p.w1.rows(), p.w1.cols());
  fn(p.b1.data(), p.b1.size(), Eigen::Index{-1});
  fn(p.w2.data(), p.w2.rows(), p.w2.cols());
  fn(p.b2.data(), p.b2.size(), Eigen::Index{-1});
  fn(p.w_mu.data(), p.w_mu.size(), Eigen::Index{-1});
  fn(&p.b_mu, Eigen::Index{1}, Eigen::Index{-1});
  fn(&p.log_std, Eigen::Index{1}, Eigen::Index{-1});
  fn(p.w_v.data(), p.w_v.size(), Eigen::Index{-1});
  fn(&p.b_v, Eigen::Index{1}, Eigen::Index{-1});
}

}  // namespace

Eigen::Index TensorInfo::size() const {
  Eigen::Index n = 1;
  for (auto d : shape) n *= d;
  return n;
}

PolicyParams PolicyParams::zeros(Eigen::Index input_dim, Eigen::Index hidden) {
  PolicyParams p;
  p.w1 = Eigen::MatrixXd::Zero(hidden, input_dim);
  p.b1 = Eigen::VectorXd::Zero(hidden);
  p.w2 = Eigen::MatrixXd::Zero(hidden, hidden);
  p.b2 = Eigen::VectorXd::Zero(hidden);
  p.w_mu = Eigen::VectorXd::Zero(hidden);
  p.w_v = Eigen::VectorXd::Zero(hidden);
  return p;
}

PolicyParams PolicyParams::init(Eigen::Index input_dim, Eigen::Index hidden, double init_log_std, Rng& rng) {
  PolicyParams p = zeros(input_dim, hidden);
  auto glorot = [&](Eigen::MatrixXd& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = u(rng);
    }
  };
  glorot(p.w1);
  glorot(p.w2);
  std::uniform_real_distribution<double> head(-0.01, 0.01);
  for (Eigen::Index i = 0; i < hidden; ++i) p.w_mu[i] = head(rng);
  for (Eigen::Index i = 0; i < hidden; ++i) p.w_v[i] = head(rng);
  p.log_std = std::clamp(init_log_std, kLogStdMin, kLogStdMax);
  return p;
}

std::vector<TensorInfo> PolicyParams::layout() const {
  const Eigen::Index h = hidden();
  return {
      {"w1", {h, input_dim()}}, {"b1", {h}},   {"w2", {h, h}},      {"b2", {h}},  {"w_mu", {h}},
      {"b_mu", {1}},            {"log_std", {1}}, {"w_v", {h}},     {"b_v", {1}},
  };
}

Eigen::Index PolicyParams::num_params() const {
  Eigen::Index n = 0;
  for (const auto& t : layout()) n += t.size();
  return n;
}

Eigen::VectorXd PolicyParams::flatten() const {
  Eigen::VectorXd flat(num_params());
  Eigen::Index k = 0;
  for_each_tensor(*this, [&](const double* data, Eigen::Index rows, Eigen::Index cols) {
    if (cols < 0) {
      for (Eigen::Index i = 0; i < rows; ++i) flat[k++] = data[i];
      return;
    }
    // Eigen storage is column-major; emit row-major.
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) flat[k++] = data[c * rows + r];
    }
  });
  return flat;
}

void PolicyParams::unflatten(const Eigen::VectorXd& flat) {
  if (flat.size() != num_params()) {
    throw ValidationError("unflatten: expected " + std::to_string(num_params()) + " values, got " +
                          std::to_string(flat.size()));
  }
  Eigen::Index k = 0;
  for_each_tensor(*this, [&](double* data, Eigen::Index rows, Eigen::Index cols) {
    if (cols < 0) {
      for (Eigen::Index i = 0; i < rows; ++i) data[i] = flat[k++];
      return;
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) data[c * rows + r] = flat[k++];
    }
  });
}

bool PolicyParams::operator==(const PolicyParams& o) const {
  return w1.rows() == o.w1.rows() && w1.cols() == o.w1.cols() && w1 == o.w1 && b1 == o.b1 && w2 == o.w2 &&
         b2 == o.b2 && w_mu == o.w_mu && b_mu == o.b_mu && log_std == o.log_std && w_v == o.w_v && b_v == o.b_v;
}

PolicyOutput forward(const PolicyParams& p, const Eigen::VectorXd& obs) {
  if (obs.size() != p.input_dim()) {
    throw ValidationError("observation length " + std::to_string(obs.size()) + " does not match network input " +
                          std::to_string(p.input_dim()));
  }
  const Eigen::VectorXd h1 = (p.w1 * obs + p.b1).array().tanh().matrix();
  const Eigen::VectorXd h2 = (p.w2 * h1 + p.b2).array().tanh().matrix();
  PolicyOutput out;
  out.mean = p.w_mu.dot(h2) + p.b_mu;
  out.value = p.w_v.dot(h2) + p.b_v;
  out.log_std = std::clamp(p.log_std, kLogStdMin, kLogStdMax);
  return out;
}

double loss_value(const PolicyParams& p, const Batch& batch, double entropy_coef) {
  const Activations a = forward_batch(p, batch.obs);
  const double ls = std::clamp(p.log_std, kLogStdMin, kLogStdMax);
  const auto b = static_cast<double>(batch.obs.rows());
  double actor = 0.0;
  double critic = 0.0;
  for (Eigen::Index i = 0; i < batch.obs.rows(); ++i) {
    const double z = batch.pre_squash[i];
    const double logp = normal_log_density(z, a.mu[i], ls) - log_one_minus_tanh_sq(z) - std::log(batch.a_max);
    actor -= logp * batch.advantages[i];
    critic += (a.value[i] - batch.returns[i]) * (a.value[i] - batch.returns[i]);
  }
  const double entropy = 0.5 + kHalfLog2Pi + ls;
  return actor / b - entropy_coef * entropy + 0.5 * critic / b;
}

LossResult loss_and_grads(const PolicyParams& p, const Batch& batch, double entropy_coef, double grad_clip) {
  const Eigen::Index n = batch.obs.rows();
  if (n == 0 || batch.pre_squash.size() != n || batch.advantages.size() != n || batch.returns.size() != n) {
    throw ValidationError("loss_and_grads: inconsistent batch sizes");
  }
  const Activations a = forward_batch(p, batch.obs);
  const double ls = std::clamp(p.log_std, kLogStdMin, kLogStdMax);
  const double inv_sigma = std::exp(-ls);
  const double inv_b = 1.0 / static_cast<double>(n);

  const Eigen::ArrayXd u = (batch.pre_squash - a.mu).array() * inv_sigma;
  Eigen::ArrayXd log_jac(n);
  for (Eigen::Index i = 0; i < n; ++i) log_jac[i] = log_one_minus_tanh_sq(batch.pre_squash[i]);
  const Eigen::ArrayXd logp = -0.5 * u.square() - ls - kHalfLog2Pi - log_jac - std::log(batch.a_max);
  const Eigen::ArrayXd adv = batch.advantages.array();
  const Eigen::ArrayXd err = (a.value - batch.returns).array();

  LossResult r;
  LossTerms& t = r.terms;
  t.entropy = 0.5 + kHalfLog2Pi + ls;
  t.mean_log_prob = logp.mean();
  t.actor = -(logp * adv).sum() * inv_b - entropy_coef * t.entropy;
  t.critic = err.square().sum() * inv_b;
  t.total = t.actor + 0.5 * t.critic;

  // d logp / d mu = u / sigma ; d logp / d log_std = u^2 - 1
  const Eigen::VectorXd d_mu = (-inv_b * adv * u * inv_sigma).matrix();
  const Eigen::VectorXd d_value = (inv_b * err).matrix();

  PolicyParams& g = r.grads;
  g = PolicyParams::zeros(p.input_dim(), p.hidden());
  g.log_std = log_std_inside(p.log_std) ? (-inv_b * (adv * (u.square() - 1.0)).sum() - entropy_coef) : 0.0;
  g.w_mu = a.h2.transpose() * d_mu;
  g.b_mu = d_mu.sum();
  g.w_v = a.h2.transpose() * d_value;
  g.b_v = d_value.sum();

  const Eigen::MatrixXd d_pre2 =
      ((d_mu * p.w_mu.transpose() + d_value * p.w_v.transpose()).array() * (1.0 - a.h2.array().square())).matrix();
  g.w2 = d_pre2.transpose() * a.h1;
  g.b2 = d_pre2.colwise().sum().transpose();
  const Eigen::MatrixXd d_pre1 = ((d_pre2 * p.w2).array() * (1.0 - a.h1.array().square())).matrix();
  g.w1 = d_pre1.transpose() * batch.obs;
  g.b1 = d_pre1.colwise().sum().transpose();

  t.finite = std::isfinite(t.total);
  if (t.finite) {
    t.grad_norm = grad_clip > 0.0 ? clip_global_norm(g, grad_clip) : g.flatten().norm();
    t.clipped = grad_clip > 0.0 && t.grad_norm > grad_clip;
    t.finite = std::isfinite(t.grad_norm);
  }
  return r;
}

double clip_global_norm(PolicyParams& grads, double clip) {
  double sq = grads.w1.squaredNorm() + grads.b1.squaredNorm() + grads.w2.squaredNorm() + grads.b2.squaredNorm() +
              grads.w_mu.squaredNorm() + grads.b_mu * grads.b_mu + grads.log_std * grads.log_std +
              grads.w_v.squaredNorm() + grads.b_v * grads.b_v;
  const double norm = std::sqrt(sq);
  if (norm > clip && norm > 0.0) {
    const double s = clip / norm;
    grads.w1 *= s;
    grads.b1 *= s;
    grads.w2 *= s;
    grads.b2 *= s;
    grads.w_mu *= s;
    grads.b_mu *= s;
    grads.log_std *= s;
    grads.w_v *= s;
    grads.b_v *= s;
  }
  return norm;
}

bool normalize_advantages(Eigen::VectorXd& adv) {
  if (adv.size() == 0) return false;
  const double m = adv.mean();
  const double sd = std::sqrt((adv.array() - m).square().mean());
  if (!(sd >= 1e-8)) return false;
  adv = ((adv.array() - m) / sd).matrix();
  return true;
}

}  // namespace dhedge::agent
