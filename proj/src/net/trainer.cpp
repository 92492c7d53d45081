// SPDX-License-Identifier: Apache-2.0
#include "robotid/net/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "robotid/core/encoding.hpp"
#include "robotid/core/sequence_io.hpp"
#include "robotid/net/backprop.hpp"
#include "robotid/net/network.hpp"

namespace robotid::net {

namespace {

struct EncodedSequence {
  Eigen::MatrixXd inputs;   // Q x T, normalized
  std::vector<int> labels;  // M * T
  int length = 0;
};

EncodedSequence encode_sequence(const core::SequenceRecord& seq, const NetworkParams& params) {
  const Architecture& a = params.arch();
  EncodedSequence e;
  e.length = static_cast<int>(seq.frames.size());
  e.inputs.resize(a.input_dim(), e.length);
  e.labels.reserve(seq.frames.size() * static_cast<std::size_t>(a.n_slots));
  for (int t = 0; t < e.length; ++t) {
    const core::FrameRecord& f = seq.frames[static_cast<std::size_t>(t)];
    e.inputs.col(t) = normalized_input(f.input, params);
    e.labels.insert(e.labels.end(), f.label.classes.begin(), f.label.classes.end());
  }
  return e;
}

// Packs steps [begin, end) of the selected sequences into one lockstep window.
WindowBatch pack_window(const std::vector<const EncodedSequence*>& batch, int begin, int end,
                        int n_slots) {
  WindowBatch w;
  w.steps = end - begin;
  w.batch = static_cast<int>(batch.size());
  const Eigen::Index q = batch.front()->inputs.rows();
  const auto cols = static_cast<Eigen::Index>(w.steps) * w.batch;
  w.inputs = Eigen::MatrixXd::Zero(q, cols);
  w.labels.assign(static_cast<std::size_t>(cols) * static_cast<std::size_t>(n_slots), 0);
  w.valid.assign(static_cast<std::size_t>(cols), 0);
  for (int t = 0; t < w.steps; ++t) {
    for (int b = 0; b < w.batch; ++b) {
      const EncodedSequence& s = *batch[static_cast<std::size_t>(b)];
      const int src = begin + t;
      if (src >= s.length) continue;
      const Eigen::Index col = static_cast<Eigen::Index>(t) * w.batch + b;
      w.inputs.col(col) = s.inputs.col(src);
      std::copy_n(s.labels.begin() + static_cast<std::ptrdiff_t>(src) * n_slots, n_slots,
                  w.labels.begin() + col * n_slots);
      w.valid[static_cast<std::size_t>(col)] = 1;
    }
  }
  return w;
}

void check_shapes(const std::vector<core::SequenceRecord>& sequences) {
  if (sequences.empty()) throw std::invalid_argument("train: empty dataset");
  const core::SequenceMeta& m0 = sequences.front().meta;
  for (const auto& s : sequences) {
    if (s.meta.n_robots != m0.n_robots || s.meta.n_slots != m0.n_slots) {
      throw std::invalid_argument("train: sequences disagree on (N, M)");
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("TrainConfig: ") + what);
  };
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(lr_decay >= 0.0, "lr_decay must be >= 0");
  require(l2 >= 0.0, "l2 must be >= 0");
  require(bptt_window >= 1, "bptt_window must be >= 1");
  require(chunk_length >= 1, "chunk_length must be >= 1");
  require(max_epochs >= 0, "max_epochs must be >= 0");
  require(batch_sequences >= 1, "batch_sequences must be >= 1");
  require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0, "Adam betas must be in [0, 1)");
  require(epsilon > 0.0, "epsilon must be positive");
  require(hidden >= 1 && layers >= 1, "hidden and layers must be >= 1");
}

AdamConfig TrainConfig::adam() const {
  return {learning_rate, lr_decay, beta1, beta2, epsilon, clip_norm};
}

Normalization compute_normalization(const std::vector<core::SequenceRecord>& sequences) {
  check_shapes(sequences);
  const int n = sequences.front().meta.n_robots;
  const int m = sequences.front().meta.n_slots;
  const int q = core::input_length(n, m);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd x(q);
  double count = 0.0;
  for (const auto& s : sequences) {
    for (const auto& f : s.frames) {
      core::encode_frame_into(f.input, n, m, std::span<double>(x.data(), x.size()));
      sum += x;
      count += 1.0;
    }
  }
  Normalization norm = Normalization::identity(q);
  if (count == 0.0) return norm;
  norm.mean = sum / count;
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(q);
  for (const auto& s : sequences) {
    for (const auto& f : s.frames) {
      core::encode_frame_into(f.input, n, m, std::span<double>(x.data(), x.size()));
      sq += (x - norm.mean).cwiseAbs2();
    }
  }
  for (int i = 0; i < q; ++i) {
    const double sd = std::sqrt(sq(i) / count);
    norm.stddev(i) = sd > 1e-8 ? sd : 1.0;
  }
  return norm;
}

TrainResult train(const std::vector<core::SequenceRecord>& sequences, const TrainConfig& config,
                  const std::optional<NetworkParams>& initial, const EpochCallback& on_epoch) {
  config.validate();
  check_shapes(sequences);
  const core::SequenceMeta& meta = sequences.front().meta;

  TrainResult result;
  if (initial) {
    initial->validate();
    if (initial->arch().n_robots != meta.n_robots || initial->arch().n_slots != meta.n_slots) {
      throw std::invalid_argument("train: initial parameters do not match dataset (N, M)");
    }
    result.params = *initial;
  } else {
    Architecture arch{meta.n_robots, meta.n_slots, config.hidden, config.layers};
    result.params = NetworkParams::initialize(arch, config.seed);
    result.params.norm = compute_normalization(sequences);
  }
  NetworkParams& params = result.params;
  const Architecture arch = params.arch();

  std::vector<EncodedSequence> encoded;
  encoded.reserve(sequences.size());
  for (const auto& s : sequences) encoded.push_back(encode_sequence(s, params));

  const AdamConfig adam_config = config.adam();
  AdamState adam(params.weights.size());
  ParamBuffer grad(arch);
  NetworkParams last_good = params;
  std::mt19937_64 rng(config.seed ^ 0x5DEECE66DULL);
  std::vector<std::size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_sequences)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_sequences));
      std::vector<const EncodedSequence*> batch;
      int max_len = 0;
      for (std::size_t k = start; k < stop; ++k) {
        batch.push_back(&encoded[order[k]]);
        max_len = std::max(max_len, batch.back()->length);
      }
      BatchState state = BatchState::zeros(arch, static_cast<int>(batch.size()));
      for (int chunk = 0; chunk < max_len; chunk += config.chunk_length) {
        const int chunk_end = std::min(max_len, chunk + config.chunk_length);
        double chunk_nll = 0.0;
        long chunk_frames = 0;
        AdamStepInfo info;
        for (int w = chunk; w < chunk_end; w += config.bptt_window) {
          const int w_end = std::min(chunk_end, w + config.bptt_window);
          const WindowBatch window = pack_window(batch, w, w_end, arch.n_slots);
          const long valid = std::count(window.valid.begin(), window.valid.end(), char{1});
          if (valid == 0) continue;
          const double scale = 1.0 / static_cast<double>(valid);
          grad.set_zero();
          const WindowLoss loss = window_loss(params, window, state, config.l2, scale, &grad);
          if (!std::isfinite(loss.total()) || !grad.all_finite()) {
            result.diverged = true;
            params = last_good;
            return result;
          }
          info = adam_step(params.weights, grad, adam, adam_config);
          chunk_nll += loss.data / scale;
          chunk_frames += valid;
        }
        result.steps = adam.step;
        if (chunk_frames > 0) {
          result.log.push_back({adam.step, epoch, chunk_nll / static_cast<double>(chunk_frames),
                                info.learning_rate, info.grad_norm});
        }
        last_good = params;
      }
    }
    if (on_epoch) on_epoch(epoch, result.log);
  }
  return result;
}

double evaluate_loss(const std::vector<core::SequenceRecord>& sequences,
                     const NetworkParams& params) {
  double total = 0.0;
  long frames = 0;
  constexpr int kSpan = 500;
  for (const auto& s : sequences) {
    const EncodedSequence e = encode_sequence(s, params);
    std::vector<const EncodedSequence*> one{&e};
    BatchState state = BatchState::zeros(params.arch(), 1);
    for (int w = 0; w < e.length; w += kSpan) {
      const WindowBatch window = pack_window(one, w, std::min(e.length, w + kSpan),
                                             params.arch().n_slots);
      total += window_loss(params, window, state, 0.0, 1.0, nullptr).data;
      frames += window.steps;
    }
  }
  return frames > 0 ? total / static_cast<double>(frames) : 0.0;
}

void write_train_log(const std::vector<TrainLogEntry>& log, std::ostream& out) {
  out << "step,epoch,chunk_loss,learning_rate,grad_norm\n";
  for (const auto& e : log) {
    out << e.step << ',' << e.epoch << ',' << core::format_double(e.chunk_loss) << ','
        << core::format_double(e.learning_rate) << ',' << core::format_double(e.grad_norm)
        << '\n';
  }
}

void write_train_log(const std::vector<TrainLogEntry>& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_train_log(log, out);
}

}  // namespace robotid::net
