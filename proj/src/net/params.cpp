// SPDX-License-Identifier: Apache-2.0
#include "robotid/net/params.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "robotid/core/encoding.hpp"

namespace robotid::net {

int Architecture::input_dim() const { return core::input_length(n_robots, n_slots); }

void Architecture::validate() const {
  if (n_robots < 1 || n_slots < n_robots || hidden < 1 || layers < 1) {
    throw std::invalid_argument("Architecture: need N >= 1, M >= N, hidden >= 1, layers >= 1");
  }
}

namespace {

constexpr std::size_t kBlockAlign = 8;  // doubles per 64 bytes

std::size_t aligned(std::size_t offset) {
  return (offset + kBlockAlign - 1) / kBlockAlign * kBlockAlign;
}

}  // namespace

ParamBuffer::ParamBuffer(const Architecture& arch) : arch_(arch) {
  arch_.validate();
  const auto h = static_cast<std::size_t>(arch.hidden);
  std::size_t offset = 0;
  for (int l = 0; l < arch.layers; ++l) {
    const auto in = static_cast<std::size_t>(arch.layer_input_dim(l));
    LayerOffsets lo{};
    lo.input = offset;
    weight_segments_.push_back({offset, offset + 4 * h * in});
    offset = aligned(offset + 4 * h * in);
    lo.recurrent = offset;
    weight_segments_.push_back({offset, offset + 4 * h * h});
    offset = aligned(offset + 4 * h * h);
    lo.bias = offset;
    offset = aligned(offset + 4 * h);
    layer_offsets_.push_back(lo);
  }
  const auto heads = static_cast<std::size_t>(arch.n_slots * arch.classes());
  output_weights_ = offset;
  weight_segments_.push_back({offset, offset + heads * h});
  offset = aligned(offset + heads * h);
  output_bias_ = offset;
  offset = aligned(offset + heads);
  data_.assign(offset, 0.0);
}

MatrixMap ParamBuffer::input_weights(int layer) {
  return {data_.data() + layer_offsets_.at(layer).input, 4 * arch_.hidden,
          arch_.layer_input_dim(layer)};
}
MatrixMap ParamBuffer::recurrent_weights(int layer) {
  return {data_.data() + layer_offsets_.at(layer).recurrent, 4 * arch_.hidden, arch_.hidden};
}
VectorMap ParamBuffer::bias(int layer) {
  return {data_.data() + layer_offsets_.at(layer).bias, 4 * arch_.hidden};
}
MatrixMap ParamBuffer::output_weights() {
  return {data_.data() + output_weights_, arch_.n_slots * arch_.classes(), arch_.hidden};
}
VectorMap ParamBuffer::output_bias() {
  return {data_.data() + output_bias_, arch_.n_slots * arch_.classes()};
}

ConstMatrixMap ParamBuffer::input_weights(int layer) const {
  return {data_.data() + layer_offsets_.at(layer).input, 4 * arch_.hidden,
          arch_.layer_input_dim(layer)};
}
ConstMatrixMap ParamBuffer::recurrent_weights(int layer) const {
  return {data_.data() + layer_offsets_.at(layer).recurrent, 4 * arch_.hidden, arch_.hidden};
}
ConstVectorMap ParamBuffer::bias(int layer) const {
  return {data_.data() + layer_offsets_.at(layer).bias, 4 * arch_.hidden};
}
ConstMatrixMap ParamBuffer::output_weights() const {
  return {data_.data() + output_weights_, arch_.n_slots * arch_.classes(), arch_.hidden};
}
ConstVectorMap ParamBuffer::output_bias() const {
  return {data_.data() + output_bias_, arch_.n_slots * arch_.classes()};
}

LayerWeights ParamBuffer::layer(int l) const {
  return {input_weights(l), recurrent_weights(l), bias(l)};
}

double ParamBuffer::weight_square_sum() const {
  double s = 0.0;
  for (const Segment& seg : weight_segments_) {
    for (std::size_t i = seg.begin; i < seg.end; ++i) s += data_[i] * data_[i];
  }
  return s;
}

void ParamBuffer::add_weight_decay_gradient(const ParamBuffer& params, double lambda) {
  if (params.size() != size()) throw std::invalid_argument("weight decay: size mismatch");
  for (const Segment& seg : weight_segments_) {
    for (std::size_t i = seg.begin; i < seg.end; ++i) data_[i] += 2.0 * lambda * params.data_[i];
  }
}

bool ParamBuffer::is_weight(std::size_t i) const {
  for (const Segment& seg : weight_segments_) {
    if (i >= seg.begin && i < seg.end) return true;
  }
  return false;
}

void ParamBuffer::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

double ParamBuffer::squared_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

bool ParamBuffer::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Normalization Normalization::identity(int dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

void NetworkParams::validate() const {
  arch().validate();
  const int q = arch().input_dim();
  if (norm.mean.size() != q || norm.stddev.size() != q) {
    throw std::invalid_argument("NetworkParams: normalization length != Q");
  }
  if (!weights.all_finite() || !norm.mean.allFinite() || !norm.stddev.allFinite()) {
    throw std::invalid_argument("NetworkParams: non-finite value");
  }
  if ((norm.stddev.array() <= 0.0).any()) {
    throw std::invalid_argument("NetworkParams: stddev entries must be positive");
  }
}

NetworkParams NetworkParams::initialize(const Architecture& arch, std::uint64_t seed) {
  NetworkParams p{ParamBuffer(arch), Normalization::identity(arch.input_dim())};
  std::mt19937_64 rng(seed);
  auto fill = [&](auto&& block, double fan_in) {
    std::uniform_real_distribution<double> u(-1.0 / std::sqrt(fan_in), 1.0 / std::sqrt(fan_in));
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      for (Eigen::Index i = 0; i < block.rows(); ++i) block(i, j) = u(rng);
    }
  };
  for (int l = 0; l < arch.layers; ++l) {
    const double fan_in = arch.layer_input_dim(l) + arch.hidden;
    fill(p.weights.input_weights(l), fan_in);
    fill(p.weights.recurrent_weights(l), fan_in);
    VectorMap b = p.weights.bias(l);
    b.setZero();
    b.segment(static_cast<int>(Gate::forget) * arch.hidden, arch.hidden).setOnes();
  }
  fill(p.weights.output_weights(), arch.hidden);
  p.weights.output_bias().setZero();
  return p;
}

}  // namespace robotid::net
