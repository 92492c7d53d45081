// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "robotid/core/types.hpp"
#include "robotid/net/network.hpp"
#include "robotid/net/params.hpp"

namespace robotid::net {

/// Hidden state for B independent streams processed in lockstep (H x B per layer).
struct BatchState {
  std::vector<Eigen::MatrixXd> h;
  std::vector<Eigen::MatrixXd> c;

  static BatchState zeros(const Architecture& arch, int batch);
  static BatchState from(const HiddenState& state);
  [[nodiscard]] HiddenState column(int b) const;
};

/// A BPTT window of T steps for B streams. Column t * B + b of `inputs`
/// holds the normalized input of stream b at step t; labels are laid out the
/// same way with M entries per column. Columns with valid == 0 contribute
/// no loss.
struct WindowBatch {
  int steps = 0;
  int batch = 1;
  Eigen::MatrixXd inputs;       // Q x (T * B)
  std::vector<int> labels;      // M * T * B
  std::vector<char> valid;      // T * B
};

struct WindowLoss {
  double data = 0.0;     // scaled negative log-likelihood
  double penalty = 0.0;  // lambda * sum W^2
  long terms = 0;        // number of (step, stream) columns scored

  [[nodiscard]] double total() const { return data + penalty; }
};

/// Loss of one window, and optionally its exact gradient, truncated at the
/// window start:
///   data_scale * sum_{t,b,m} -log p(label) + lambda * sum W^2.
/// `state` holds the initial hidden state on entry and the final state on exit.
/// When `grad` is non-null the gradient is accumulated into it.
WindowLoss window_loss(const NetworkParams& params, const WindowBatch& window,
                       BatchState& state, double lambda, double data_scale,
                       ParamBuffer* grad);

struct LabelledFrame {
  core::FrameInput input;
  core::AssignmentLabel label;
};

/// Packs a single-stream window.
WindowBatch make_window(const std::vector<LabelledFrame>& frames, const NetworkParams& params);

/// Exact gradient of sum_t nll + lambda * sum W^2 over the window, starting
/// from `initial`. An empty window yields a zero gradient. Throws
/// std::runtime_error if any gradient entry is non-finite.
ParamBuffer backward(const std::vector<LabelledFrame>& frames, const HiddenState& initial,
                     const NetworkParams& params, double lambda);

}  // namespace robotid::net
