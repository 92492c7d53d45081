// SPDX-License-Identifier: Apache-2.0
#include "robotid/net/backprop.hpp"

#include <cmath>
#include <stdexcept>

namespace robotid::net {

namespace {

struct LayerCache {
  Eigen::MatrixXd gates;  // 4H x N, post-activation i, f, o, g
  Eigen::MatrixXd c;      // H x N
  Eigen::MatrixXd tanh_c; // H x N
  Eigen::MatrixXd h;      // H x N
  Eigen::MatrixXd h0, c0; // H x B, state entering the window
};

double tanh_scalar(double v) { return std::tanh(v); }

}  // namespace

BatchState BatchState::zeros(const Architecture& arch, int batch) {
  BatchState s;
  s.h.assign(static_cast<std::size_t>(arch.layers), Eigen::MatrixXd::Zero(arch.hidden, batch));
  s.c = s.h;
  return s;
}

BatchState BatchState::from(const HiddenState& state) {
  BatchState s;
  for (const CellState& l : state.layers) {
    s.h.emplace_back(l.h);
    s.c.emplace_back(l.c);
  }
  return s;
}

HiddenState BatchState::column(int b) const {
  HiddenState out;
  for (std::size_t l = 0; l < h.size(); ++l) out.layers.push_back({h[l].col(b), c[l].col(b)});
  return out;
}

WindowLoss window_loss(const NetworkParams& params, const WindowBatch& window,
                       BatchState& state, double lambda, double data_scale,
                       ParamBuffer* grad) {
  const Architecture& a = params.arch();
  const int hd = a.hidden;
  const int n_layers = a.layers;
  const int heads = a.n_slots;
  const int k_cls = a.classes();
  const int steps = window.steps;
  const int batch = window.batch;
  const Eigen::Index cols = static_cast<Eigen::Index>(steps) * batch;

  if (batch < 1 || steps < 0) throw std::invalid_argument("window_loss: bad window shape");
  if (window.inputs.rows() != a.input_dim() || window.inputs.cols() != cols ||
      static_cast<Eigen::Index>(window.labels.size()) != cols * heads ||
      static_cast<Eigen::Index>(window.valid.size()) != cols) {
    throw std::invalid_argument("window_loss: window buffers do not match the architecture");
  }
  if (static_cast<int>(state.h.size()) != n_layers || static_cast<int>(state.c.size()) != n_layers) {
    throw std::invalid_argument("window_loss: batch state has wrong depth");
  }
  for (int l = 0; l < n_layers; ++l) {
    if (state.h[static_cast<std::size_t>(l)].rows() != hd ||
        state.h[static_cast<std::size_t>(l)].cols() != batch) {
      throw std::invalid_argument("window_loss: batch state has wrong shape");
    }
  }
  if (grad != nullptr && !(grad->arch() == a)) {
    throw std::invalid_argument("window_loss: gradient buffer shape mismatch");
  }

  WindowLoss loss;
  loss.penalty = l2_penalty(params.weights, lambda);
  if (grad != nullptr) grad->add_weight_decay_gradient(params.weights, lambda);
  if (steps == 0) return loss;

  // Forward, one layer at a time over the whole window.
  std::vector<LayerCache> caches(static_cast<std::size_t>(n_layers));
  const Eigen::MatrixXd* layer_in = &window.inputs;
  for (int l = 0; l < n_layers; ++l) {
    LayerCache& lc = caches[static_cast<std::size_t>(l)];
    const LayerWeights w = params.weights.layer(l);
    lc.h0 = state.h[static_cast<std::size_t>(l)];
    lc.c0 = state.c[static_cast<std::size_t>(l)];
    lc.gates.noalias() = w.input * (*layer_in);
    lc.gates.colwise() += w.bias;
    lc.c.resize(hd, cols);
    lc.tanh_c.resize(hd, cols);
    lc.h.resize(hd, cols);
    for (int t = 0; t < steps; ++t) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(t) * batch;
      auto z = lc.gates.middleCols(c0, batch);
      if (t == 0) {
        z.noalias() += w.recurrent * lc.h0;
      } else {
        z.noalias() += w.recurrent * lc.h.middleCols(c0 - batch, batch);
      }
      z.topRows(3 * hd) = z.topRows(3 * hd).unaryExpr([](double v) { return sigmoid(v); });
      z.bottomRows(hd) = z.bottomRows(hd).unaryExpr(&tanh_scalar);
      const auto i = z.middleRows(0, hd).array();
      const auto f = z.middleRows(hd, hd).array();
      const auto o = z.middleRows(2 * hd, hd).array();
      const auto g = z.middleRows(3 * hd, hd).array();
      if (t == 0) {
        lc.c.middleCols(c0, batch).array() = f * lc.c0.array() + i * g;
      } else {
        lc.c.middleCols(c0, batch).array() = f * lc.c.middleCols(c0 - batch, batch).array() + i * g;
      }
      lc.tanh_c.middleCols(c0, batch) = lc.c.middleCols(c0, batch).unaryExpr(&tanh_scalar);
      lc.h.middleCols(c0, batch).array() = o * lc.tanh_c.middleCols(c0, batch).array();
    }
    state.h[static_cast<std::size_t>(l)] = lc.h.rightCols(batch);
    state.c[static_cast<std::size_t>(l)] = lc.c.rightCols(batch);
    layer_in = &lc.h;
  }

  // Output heads, loss and d(loss)/d(logits).
  const Eigen::MatrixXd& top = caches.back().h;
  Eigen::MatrixXd logits = params.weights.output_weights() * top;
  logits.colwise() += params.weights.output_bias();
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  double data = 0.0;
  for (Eigen::Index n = 0; n < cols; ++n) {
    if (!window.valid[static_cast<std::size_t>(n)]) continue;
    ++loss.terms;
    for (int m = 0; m < heads; ++m) {
      auto block = logits.col(n).segment(m * k_cls, k_cls);
      const double mx = block.maxCoeff();
      Eigen::VectorXd p = (block.array() - mx).exp().matrix();
      p /= p.sum();
      const int label = window.labels[static_cast<std::size_t>(n * heads + m)];
      if (label < 0 || label >= k_cls) throw std::invalid_argument("window_loss: class out of range");
      const double pc = p(label);
      data -= std::log(std::max(pc, kProbabilityFloor));
      if (pc > kProbabilityFloor) {
        auto d = dlogits.col(n).segment(m * k_cls, k_cls);
        d = data_scale * p;
        d(label) -= data_scale;
      }
    }
  }
  loss.data = data_scale * data;
  if (grad == nullptr) return loss;

  // Backward through the heads, then each layer back through time.
  grad->output_weights().noalias() += dlogits * top.transpose();
  grad->output_bias() += dlogits.rowwise().sum();
  Eigen::MatrixXd dh_in = params.weights.output_weights().transpose() * dlogits;

  Eigen::MatrixXd dz(4 * hd, cols);
  Eigen::MatrixXd dh_next(hd, batch);
  Eigen::MatrixXd dc_next(hd, batch);
  Eigen::ArrayXXd dh(hd, batch);
  Eigen::ArrayXXd dc(hd, batch);
  for (int l = n_layers - 1; l >= 0; --l) {
    const LayerCache& lc = caches[static_cast<std::size_t>(l)];
    const LayerWeights w = params.weights.layer(l);
    dh_next.setZero();
    dc_next.setZero();
    for (int t = steps - 1; t >= 0; --t) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(t) * batch;
      const auto gates = lc.gates.middleCols(c0, batch);
      const auto i = gates.middleRows(0, hd).array();
      const auto f = gates.middleRows(hd, hd).array();
      const auto o = gates.middleRows(2 * hd, hd).array();
      const auto g = gates.middleRows(3 * hd, hd).array();
      const auto tc = lc.tanh_c.middleCols(c0, batch).array();
      const auto c_prev = (t == 0 ? lc.c0.middleCols(0, batch)
                                  : lc.c.middleCols(c0 - batch, batch)).array();
      dh = dh_in.middleCols(c0, batch).array() + dh_next.array();
      dc = dc_next.array() + dh * o * (1.0 - tc * tc);
      auto dzt = dz.middleCols(c0, batch);
      dzt.middleRows(0, hd).array() = dc * g * i * (1.0 - i);
      dzt.middleRows(hd, hd).array() = dc * c_prev * f * (1.0 - f);
      dzt.middleRows(2 * hd, hd).array() = dh * tc * o * (1.0 - o);
      dzt.middleRows(3 * hd, hd).array() = dc * i * (1.0 - g * g);
      dc_next.array() = dc * f;
      dh_next.noalias() = w.recurrent.transpose() * dzt;
    }
    const Eigen::MatrixXd& x = (l == 0) ? window.inputs : caches[static_cast<std::size_t>(l - 1)].h;
    grad->input_weights(l).noalias() += dz * x.transpose();
    grad->bias(l) += dz.rowwise().sum();
    grad->recurrent_weights(l).noalias() += dz.leftCols(batch) * lc.h0.transpose();
    if (cols > batch) {
      grad->recurrent_weights(l).noalias() +=
          dz.rightCols(cols - batch) * lc.h.leftCols(cols - batch).transpose();
    }
    if (l > 0) dh_in.noalias() = w.input.transpose() * dz;
  }
  return loss;
}

WindowBatch make_window(const std::vector<LabelledFrame>& frames, const NetworkParams& params) {
  const Architecture& a = params.arch();
  WindowBatch w;
  w.steps = static_cast<int>(frames.size());
  w.batch = 1;
  w.inputs.resize(a.input_dim(), w.steps);
  w.labels.reserve(frames.size() * static_cast<std::size_t>(a.n_slots));
  w.valid.assign(frames.size(), 1);
  for (int t = 0; t < w.steps; ++t) {
    const LabelledFrame& f = frames[static_cast<std::size_t>(t)];
    w.inputs.col(t) = normalized_input(f.input, params);
    if (static_cast<int>(f.label.classes.size()) != a.n_slots) {
      throw std::invalid_argument("make_window: label length != M");
    }
    w.labels.insert(w.labels.end(), f.label.classes.begin(), f.label.classes.end());
  }
  return w;
}

ParamBuffer backward(const std::vector<LabelledFrame>& frames, const HiddenState& initial,
                     const NetworkParams& params, double lambda) {
  ParamBuffer grad(params.arch());
  if (frames.empty()) return grad;
  const WindowBatch w = make_window(frames, params);
  BatchState state = BatchState::from(initial);
  window_loss(params, w, state, lambda, 1.0, &grad);
  if (!grad.all_finite()) {
    throw std::runtime_error("backward: non-finite gradient (window of " +
                             std::to_string(frames.size()) + " frames)");
  }
  return grad;
}

}  // namespace robotid::net
