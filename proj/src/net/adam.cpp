// SPDX-License-Identifier: Apache-2.0
#include "robotid/net/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace robotid::net {

double learning_rate_at(const AdamConfig& config, long step) {
  return config.learning_rate / (1.0 + config.decay * static_cast<double>(step));
}

AdamStepInfo adam_step(ParamBuffer& params, ParamBuffer& grad, AdamState& state,
                       const AdamConfig& config) {
  const std::size_t n = params.size();
  if (grad.size() != n || state.m.size() != n || state.v.size() != n) {
    throw std::invalid_argument("adam_step: size mismatch");
  }
  AdamStepInfo info;
  info.grad_norm = std::sqrt(grad.squared_norm());
  std::span<double> g = grad.values();
  if (config.clip_norm > 0.0 && info.grad_norm > config.clip_norm) {
    const double s = config.clip_norm / info.grad_norm;
    for (double& v : g) v *= s;
  }
  ++state.step;
  info.learning_rate = learning_rate_at(config, state.step);
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  std::span<double> p = params.values();
  for (std::size_t i = 0; i < n; ++i) {
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g[i];
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g[i] * g[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    p[i] -= info.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
  return info;
}

}  // namespace robotid::net
