// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace robotid::net {

using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

inline constexpr int kDefaultHidden = 64;
inline constexpr int kDefaultLayers = 5;

/// Shape of the association network. K = N + 1 classes per output head,
/// one head per detection slot.
struct Architecture {
  int n_robots = 2;
  int n_slots = 3;
  int hidden = kDefaultHidden;
  int layers = kDefaultLayers;

  [[nodiscard]] int input_dim() const;
  [[nodiscard]] int classes() const { return n_robots + 1; }
  [[nodiscard]] int layer_input_dim(int layer) const {
    return layer == 0 ? input_dim() : hidden;
  }
  /// Throws std::invalid_argument for non-positive sizes or M < N.
  void validate() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Gate blocks inside the stacked 4H rows of each LSTM layer, in this order.
enum class Gate : int { input = 0, forget = 1, output = 2, cell = 3 };

/// Non-owning view of one LSTM layer:
///   input     4H x in   (W_xi; W_xf; W_wo; W_xc stacked by Gate)
///   recurrent 4H x H    (W_hi; W_hf; W_ho; W_hx)
///   bias      4H        (b_i; b_f; b_o; b_c)
struct LayerWeights {
  ConstMatrixMap input;
  ConstMatrixMap recurrent;
  ConstVectorMap bias;

  [[nodiscard]] int hidden() const { return static_cast<int>(recurrent.cols()); }
  [[nodiscard]] auto input_gate(Gate g) const {
    return input.middleRows(static_cast<int>(g) * hidden(), hidden());
  }
  [[nodiscard]] auto recurrent_gate(Gate g) const {
    return recurrent.middleRows(static_cast<int>(g) * hidden(), hidden());
  }
  [[nodiscard]] auto bias_gate(Gate g) const {
    return bias.segment(static_cast<int>(g) * hidden(), hidden());
  }
};

/// Every trainable value of the network in one contiguous buffer. Gradients
/// and optimizer moments use the same type so elementwise updates are flat
/// loops. Layout: per layer [input, recurrent, bias], then [output weights
/// (M*K x H), output bias (M*K)], all column-major.
class ParamBuffer {
 public:
  ParamBuffer() = default;
  explicit ParamBuffer(const Architecture& arch);

  [[nodiscard]] const Architecture& arch() const { return arch_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] std::span<double> values() { return data_; }
  [[nodiscard]] std::span<const double> values() const { return data_; }

  MatrixMap input_weights(int layer);
  MatrixMap recurrent_weights(int layer);
  VectorMap bias(int layer);
  MatrixMap output_weights();
  VectorMap output_bias();

  [[nodiscard]] ConstMatrixMap input_weights(int layer) const;
  [[nodiscard]] ConstMatrixMap recurrent_weights(int layer) const;
  [[nodiscard]] ConstVectorMap bias(int layer) const;
  [[nodiscard]] ConstMatrixMap output_weights() const;
  [[nodiscard]] ConstVectorMap output_bias() const;
  [[nodiscard]] LayerWeights layer(int l) const;

  /// Sum of squares over weight matrices; biases are not regularized.
  [[nodiscard]] double weight_square_sum() const;
  /// this += 2 * lambda * W on the weight-matrix entries of `params`.
  void add_weight_decay_gradient(const ParamBuffer& params, double lambda);
  /// True when flat index i belongs to a regularized weight matrix.
  [[nodiscard]] bool is_weight(std::size_t i) const;

  void set_zero();
  [[nodiscard]] double squared_norm() const;
  [[nodiscard]] bool all_finite() const;

  friend bool operator==(const ParamBuffer&, const ParamBuffer&) = default;

 private:
  struct LayerOffsets {
    std::size_t input, recurrent, bias;
    friend bool operator==(const LayerOffsets&, const LayerOffsets&) = default;
  };
  struct Segment {
    std::size_t begin, end;
    friend bool operator==(const Segment&, const Segment&) = default;
  };

  Architecture arch_;
  std::vector<LayerOffsets> layer_offsets_;
  std::size_t output_weights_ = 0;
  std::size_t output_bias_ = 0;
  std::vector<Segment> weight_segments_;
  // Aligned storage with every block starting on a 64-byte boundary, so
  // vectorized kernels see the same layout on every run.
  std::vector<double, Eigen::aligned_allocator<double>> data_;
};

/// Zero-mean, unit-variance input normalization (length Q each).
struct Normalization {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  static Normalization identity(int dim);
};

struct NetworkParams {
  ParamBuffer weights;
  Normalization norm;

  [[nodiscard]] const Architecture& arch() const { return weights.arch(); }
  /// Throws std::invalid_argument on shape mismatch, non-finite values or
  /// non-positive stddev entries.
  void validate() const;

  /// Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)], forget-gate bias 1,
  /// identity normalization.
  static NetworkParams initialize(const Architecture& arch, std::uint64_t seed);
};

}  // namespace robotid::net
