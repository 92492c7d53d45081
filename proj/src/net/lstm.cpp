// SPDX-License-Identifier: Apache-2.0
#include "robotid/net/lstm.hpp"

#include <cmath>
#include <stdexcept>

namespace robotid::net {

CellState lstm_cell(const Eigen::Ref<const Eigen::VectorXd>& x, const CellState& prev,
                    const LayerWeights& w) {
  const int h = w.hidden();
  if (x.size() != w.input.cols() || prev.h.size() != h || prev.c.size() != h) {
    throw std::invalid_argument("lstm_cell: dimension mismatch");
  }
  Eigen::VectorXd z = w.input * x + w.recurrent * prev.h + w.bias;
  auto sig = [](double v) { return sigmoid(v); };
  const Eigen::ArrayXd i = z.segment(0, h).unaryExpr(sig).array();
  const Eigen::ArrayXd f = z.segment(h, h).unaryExpr(sig).array();
  const Eigen::ArrayXd o = z.segment(2 * h, h).unaryExpr(sig).array();
  const Eigen::ArrayXd g = z.segment(3 * h, h).unaryExpr([](double v) { return std::tanh(v); }).array();
  CellState next;
  next.c = (f * prev.c.array() + i * g).matrix();
  next.h = (o * next.c.unaryExpr([](double v) { return std::tanh(v); }).array()).matrix();
  return next;
}

}  // namespace robotid::net
