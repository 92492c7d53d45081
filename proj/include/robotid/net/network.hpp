// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "robotid/core/types.hpp"
#include "robotid/net/lstm.hpp"
#include "robotid/net/params.hpp"

namespace robotid::net {

/// Floor applied to probabilities inside log().
inline constexpr double kProbabilityFloor = 1e-12;

/// Per-layer (h, c) carried between frames.
struct HiddenState {
  std::vector<CellState> layers;

  static HiddenState zeros(const Architecture& arch);
  void reset();
  friend bool operator==(const HiddenState& a, const HiddenState& b);
};

struct ForwardResult {
  Eigen::MatrixXd probs;  // M x K, each row a softmax
  HiddenState state;
};

/// Normalized, encoded network input for a frame.
Eigen::VectorXd normalized_input(const core::FrameInput& frame, const NetworkParams& params);

/// One streaming step: normalize, five stacked LSTM layers, M softmax heads.
/// Pure in (frame, state, params). Throws std::invalid_argument on shape mismatch.
ForwardResult forward(const core::FrameInput& frame, const HiddenState& state,
                      const NetworkParams& params);

/// Same as forward() for an already normalized input vector.
ForwardResult forward_normalized(const Eigen::Ref<const Eigen::VectorXd>& input,
                                 const HiddenState& state, const NetworkParams& params);

/// Softmax over each row block of `logits` (length M*K, head-major) into M x K.
Eigen::MatrixXd head_softmax(const Eigen::Ref<const Eigen::VectorXd>& logits, int heads,
                             int classes);

/// -sum_m log max(probs(m, label_m), floor). Throws on invalid class.
double nll_loss(const Eigen::MatrixXd& probs, const core::AssignmentLabel& label);
/// lambda * sum of squared weight-matrix entries.
double l2_penalty(const ParamBuffer& weights, double lambda);
/// Single-frame objective: nll_loss + l2_penalty.
double nll_loss(const Eigen::MatrixXd& probs, const core::AssignmentLabel& label,
                const NetworkParams& params, double lambda);

/// Index of the row maximum; lowest index wins ties.
int argmax(const Eigen::Ref<const Eigen::RowVectorXd>& row);

struct FramePrediction {
  Eigen::MatrixXd probs;        // M x K
  core::AssignmentLabel label;  // raw per-slot argmax
  std::vector<int> robot_slot;  // per robot: best non-empty slot, -1 if none
  std::vector<double> robot_prob;
};

/// Decodes probabilities for one frame (argmax per slot and best slot per robot).
FramePrediction decode(Eigen::MatrixXd probs, const core::FrameInput& frame);

/// Streaming inference over one sequence. Not thread-safe; one per stream.
class InferenceSession {
 public:
  explicit InferenceSession(std::shared_ptr<const NetworkParams> params);

  FramePrediction step(const core::FrameInput& frame);
  void reset();
  [[nodiscard]] const HiddenState& state() const { return state_; }
  [[nodiscard]] const NetworkParams& params() const { return *params_; }

 private:
  std::shared_ptr<const NetworkParams> params_;
  HiddenState state_;
};

/// Runs a fresh session over the frames in order.
std::vector<FramePrediction> predict(const std::vector<core::FrameInput>& frames,
                                     std::shared_ptr<const NetworkParams> params);

}  // namespace robotid::net
