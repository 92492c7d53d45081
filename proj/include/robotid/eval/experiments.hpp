// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "robotid/core/types.hpp"
#include "robotid/eval/metrics.hpp"
#include "robotid/net/params.hpp"

namespace robotid::eval {

struct SwapConfig {
  int trials = 50;
  std::int64_t window = 60;         // frames with the two broadcasts exchanged
  std::int64_t max_recovery = 150;  // frames after restoration
  std::int64_t warmup = 100;        // clean frames before the swap
  int confirm_frames = 3;           // consecutive correct judged frames
  std::uint64_t seed = 1;
  void validate() const;
};

/// One perturbation: robots a and b exchange broadcast channels during
/// [start, start + window). A frame is judged when a or b is detected; it is
/// correct when every slot holding a or b is labeled correctly. Recovery is
/// the number of frames from restoration to the first of confirm_frames
/// consecutive correct judged frames.
struct SwapTrial {
  std::size_t sequence = 0;
  int robot_a = 0;  // 1-based classes
  int robot_b = 0;
  std::int64_t start = 0;
  bool recovered = false;
  std::int64_t recovery_frames = -1;  // -1 when not recovered in time
  SuccessCounts pair_before;  // pair slots, frames [warmup start, start)
  SuccessCounts pair_during;  // pair slots, frames [start, start + window)
};

struct SwapReport {
  std::vector<SwapTrial> trials;
  [[nodiscard]] double recovered_fraction() const;
};

/// Randomized trials over `sequences` (each needs >= 2 robots and enough
/// frames for warmup + window + max_recovery). A window of 0 perturbs
/// nothing and recovers in 0 frames.
SwapReport heading_swap_test(const std::vector<core::SequenceRecord>& sequences,
                             const std::shared_ptr<const net::NetworkParams>& params,
                             const SwapConfig& config);

struct ShuffleReport {
  SuccessCounts ordered;
  SuccessCounts shuffled;
};

/// Scores the net on every sequence in temporal order and again with the
/// frames randomly permuted (state carried across the permuted frames).
ShuffleReport shuffle_control_test(const std::vector<core::SequenceRecord>& sequences,
                                   const std::shared_ptr<const net::NetworkParams>& params,
                                   std::uint64_t seed);

}  // namespace robotid::eval
