// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "robotid/core/types.hpp"

namespace robotid::tracker {

/// Smoothed location of one robot in normalized field coordinates.
struct FilteredTrack {
  double x = 0.0;
  double y = 0.0;
  double alpha = 0.0;            // weight used at the last update
  std::int64_t last_update = -1;  // frame index, -1 before the first update
  bool initialized = false;
  friend bool operator==(const FilteredTrack&, const FilteredTrack&) = default;
};

/// Low-pass filter T <- alpha * L + (1 - alpha) * T per robot, where L is the
/// location of the slot assigned to the robot and alpha the probability of
/// that assignment. The first observation of a robot sets T = L. Robots
/// without an assigned slot keep their previous T.
class LowPassTracker {
 public:
  explicit LowPassTracker(int n_robots);

  /// `robot_slot[j]` is the slot assigned to robot j or -1; `robot_prob[j]`
  /// its probability. Throws std::invalid_argument on shape mismatch, a slot
  /// out of range or pointing at an empty detection, or alpha outside [0, 1].
  void update(const core::FrameInput& frame, const std::vector<int>& robot_slot,
              const std::vector<double>& robot_prob);

  [[nodiscard]] const std::vector<FilteredTrack>& tracks() const { return tracks_; }
  void reset();

 private:
  std::vector<FilteredTrack> tracks_;
};

/// One filter step for a single robot.
FilteredTrack low_pass(const FilteredTrack& track, double lx, double ly, double alpha,
                       std::int64_t t);

}  // namespace robotid::tracker
