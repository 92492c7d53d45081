// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "robotid/net/params.hpp"

namespace robotid::net {

struct CellState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;
};

/// One LSTM update:
///   i = sigma(W_xi x + W_hi h + b_i)     f = sigma(W_xf x + W_hf h + b_f)
///   o = sigma(W_wo x + W_ho h + b_o)     g = tanh(W_xc x + W_hx h + b_c)
///   c' = f * c + i * g                   h' = o * tanh(c')
/// Throws std::invalid_argument on dimension mismatch.
CellState lstm_cell(const Eigen::Ref<const Eigen::VectorXd>& x, const CellState& prev,
                    const LayerWeights& w);

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace robotid::net
