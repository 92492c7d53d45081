// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "robotid/core/types.hpp"
#include "robotid/net/adam.hpp"
#include "robotid/net/params.hpp"

namespace robotid::net {

struct TrainConfig {
  double learning_rate = 0.004;
  double lr_decay = 1e-4;
  double l2 = 1e-4;
  int bptt_window = 150;
  int chunk_length = 500;
  int max_epochs = 10;
  double clip_norm = 5.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Independent sequences advanced in lockstep per optimizer step.
  int batch_sequences = 1;
  int hidden = kDefaultHidden;
  int layers = kDefaultLayers;
  std::uint64_t seed = 1;

  void validate() const;
  [[nodiscard]] AdamConfig adam() const;
};

struct TrainLogEntry {
  long step = 0;  // optimizer steps taken so far
  int epoch = 0;
  double chunk_loss = 0.0;  // mean per-frame negative log-likelihood over the chunk
  double learning_rate = 0.0;
  double grad_norm = 0.0;   // of the chunk's last window, before clipping
};

struct TrainResult {
  NetworkParams params;
  std::vector<TrainLogEntry> log;
  bool diverged = false;
  long steps = 0;
};

/// Zero-mean / unit-variance statistics of the encoded inputs over every
/// frame of the training set. Constant features get stddev 1.
Normalization compute_normalization(const std::vector<core::SequenceRecord>& sequences);

using EpochCallback = std::function<void(int epoch, const std::vector<TrainLogEntry>& log)>;

/// Truncated-BPTT training. Each sequence starts from a zero state and is
/// consumed in order, in chunks of chunk_length frames split into windows of
/// bptt_window steps; state carries across windows, gradients do not. The
/// order of sequences is reshuffled every epoch.
///
/// When `initial` is given (fine-tuning) its weights and normalization are
/// kept; otherwise weights are freshly initialized and normalization is
/// computed from `sequences`. On a non-finite loss, training stops and the
/// parameters from the last completed chunk are returned with diverged set.
TrainResult train(const std::vector<core::SequenceRecord>& sequences, const TrainConfig& config,
                  const std::optional<NetworkParams>& initial = std::nullopt,
                  const EpochCallback& on_epoch = {});

/// Mean per-frame negative log-likelihood over whole sequences (state reset
/// per sequence). No regularization term.
double evaluate_loss(const std::vector<core::SequenceRecord>& sequences,
                     const NetworkParams& params);

void write_train_log(const std::vector<TrainLogEntry>& log, std::ostream& out);
void write_train_log(const std::vector<TrainLogEntry>& log, const std::filesystem::path& path);

}  // namespace robotid::net
