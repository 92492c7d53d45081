// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "robotid/net/params.hpp"

namespace robotid::net {

struct AdamConfig {
  double learning_rate = 0.004;
  double decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 5.0;  // global-norm clip; <= 0 disables
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// eta_t = eta_0 / (1 + decay * t)
double learning_rate_at(const AdamConfig& config, long step);

struct AdamStepInfo {
  double learning_rate = 0.0;
  double grad_norm = 0.0;  // before clipping
};

/// One bias-corrected Adam step. `grad` is clipped in place to the global
/// norm limit first; the step counter advances before the update.
AdamStepInfo adam_step(ParamBuffer& params, ParamBuffer& grad, AdamState& state,
                       const AdamConfig& config);

}  // namespace robotid::net
