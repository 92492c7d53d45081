// SPDX-License-Identifier: Apache-2.0
#include "robotid/net/network.hpp"

#include <cmath>
#include <stdexcept>

#include "robotid/core/encoding.hpp"

namespace robotid::net {

HiddenState HiddenState::zeros(const Architecture& arch) {
  HiddenState s;
  s.layers.assign(static_cast<std::size_t>(arch.layers),
                  CellState{Eigen::VectorXd::Zero(arch.hidden), Eigen::VectorXd::Zero(arch.hidden)});
  return s;
}

void HiddenState::reset() {
  for (CellState& l : layers) {
    l.h.setZero();
    l.c.setZero();
  }
}

bool operator==(const HiddenState& a, const HiddenState& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (a.layers[i].h != b.layers[i].h || a.layers[i].c != b.layers[i].c) return false;
  }
  return true;
}

Eigen::VectorXd normalized_input(const core::FrameInput& frame, const NetworkParams& params) {
  const Architecture& a = params.arch();
  Eigen::VectorXd x(a.input_dim());
  core::encode_frame_into(frame, a.n_robots, a.n_slots, std::span<double>(x.data(), x.size()));
  return ((x - params.norm.mean).array() / params.norm.stddev.array()).matrix();
}

Eigen::MatrixXd head_softmax(const Eigen::Ref<const Eigen::VectorXd>& logits, int heads,
                             int classes) {
  Eigen::MatrixXd probs(heads, classes);
  for (int m = 0; m < heads; ++m) {
    const auto block = logits.segment(m * classes, classes);
    const double mx = block.maxCoeff();
    double sum = 0.0;
    for (int k = 0; k < classes; ++k) {
      probs(m, k) = std::exp(block(k) - mx);
      sum += probs(m, k);
    }
    probs.row(m) /= sum;
  }
  return probs;
}

ForwardResult forward_normalized(const Eigen::Ref<const Eigen::VectorXd>& input,
                                 const HiddenState& state, const NetworkParams& params) {
  const Architecture& a = params.arch();
  if (input.size() != a.input_dim()) throw std::invalid_argument("forward: input length != Q");
  if (static_cast<int>(state.layers.size()) != a.layers) {
    throw std::invalid_argument("forward: hidden state has wrong depth");
  }
  ForwardResult out;
  out.state.layers.reserve(state.layers.size());
  Eigen::VectorXd x = input;
  for (int l = 0; l < a.layers; ++l) {
    out.state.layers.push_back(lstm_cell(x, state.layers[static_cast<std::size_t>(l)],
                                         params.weights.layer(l)));
    x = out.state.layers.back().h;
  }
  const Eigen::VectorXd logits = params.weights.output_weights() * x + params.weights.output_bias();
  out.probs = head_softmax(logits, a.n_slots, a.classes());
  return out;
}

ForwardResult forward(const core::FrameInput& frame, const HiddenState& state,
                      const NetworkParams& params) {
  if (!params.norm.stddev.allFinite() || !params.norm.mean.allFinite() ||
      (params.norm.stddev.array() <= 0.0).any()) {
    throw std::invalid_argument("forward: invalid normalization statistics");
  }
  return forward_normalized(normalized_input(frame, params), state, params);
}

double nll_loss(const Eigen::MatrixXd& probs, const core::AssignmentLabel& label) {
  if (static_cast<Eigen::Index>(label.classes.size()) != probs.rows()) {
    throw std::invalid_argument("nll_loss: label length != M");
  }
  double loss = 0.0;
  for (Eigen::Index m = 0; m < probs.rows(); ++m) {
    const int c = label.classes[static_cast<std::size_t>(m)];
    if (c < 0 || c >= probs.cols()) throw std::invalid_argument("nll_loss: class out of range");
    loss -= std::log(std::max(probs(m, c), kProbabilityFloor));
  }
  return loss;
}

double l2_penalty(const ParamBuffer& weights, double lambda) {
  return lambda * weights.weight_square_sum();
}

double nll_loss(const Eigen::MatrixXd& probs, const core::AssignmentLabel& label,
                const NetworkParams& params, double lambda) {
  return nll_loss(probs, label) + l2_penalty(params.weights, lambda);
}

int argmax(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  int best = 0;
  for (Eigen::Index k = 1; k < row.size(); ++k) {
    if (row(k) > row(best)) best = static_cast<int>(k);
  }
  return best;
}

FramePrediction decode(Eigen::MatrixXd probs, const core::FrameInput& frame) {
  FramePrediction p;
  const auto m = probs.rows();
  const int n = static_cast<int>(probs.cols()) - 1;
  p.label.classes.resize(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) p.label.classes[static_cast<std::size_t>(k)] = argmax(probs.row(k));
  p.robot_slot.assign(static_cast<std::size_t>(n), -1);
  p.robot_prob.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    for (Eigen::Index k = 0; k < m; ++k) {
      if (frame.slots[static_cast<std::size_t>(k)].empty()) continue;
      const double v = probs(k, r + 1);
      if (p.robot_slot[static_cast<std::size_t>(r)] < 0 || v > p.robot_prob[static_cast<std::size_t>(r)]) {
        p.robot_slot[static_cast<std::size_t>(r)] = static_cast<int>(k);
        p.robot_prob[static_cast<std::size_t>(r)] = v;
      }
    }
  }
  p.probs = std::move(probs);
  return p;
}

InferenceSession::InferenceSession(std::shared_ptr<const NetworkParams> params)
    : params_(std::move(params)) {
  if (!params_) throw std::invalid_argument("InferenceSession: null parameters");
  params_->validate();
  state_ = HiddenState::zeros(params_->arch());
}

FramePrediction InferenceSession::step(const core::FrameInput& frame) {
  ForwardResult r = forward(frame, state_, *params_);
  state_ = std::move(r.state);
  return decode(std::move(r.probs), frame);
}

void InferenceSession::reset() { state_.reset(); }

std::vector<FramePrediction> predict(const std::vector<core::FrameInput>& frames,
                                     std::shared_ptr<const NetworkParams> params) {
  InferenceSession session(std::move(params));
  std::vector<FramePrediction> out;
  out.reserve(frames.size());
  for (const core::FrameInput& f : frames) out.push_back(session.step(f));
  return out;
}

}  // namespace robotid::net
