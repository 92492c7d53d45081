// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "robotid/baselines/config.hpp"
#include "robotid/baselines/hungarian.hpp"
#include "robotid/baselines/kalman.hpp"
#include "robotid/core/types.hpp"

namespace robotid::baselines {

/// One track slot per robot identity plus the last position reported for
/// each robot (held after a track ends).
struct TrackSet {
  std::vector<std::optional<KalmanTrack>> tracks;
  std::vector<std::optional<Eigen::Vector2d>> last_position;

  explicit TrackSet(int n_robots = 0)
      : tracks(static_cast<std::size_t>(n_robots)),
        last_position(static_cast<std::size_t>(n_robots)) {}
};

/// Association cost between robot r and detection d:
///   w_p * Mahalanobis distance (or new_track_distance without a track)
///   + w_phi * |angular_diff(broadcast_r, phi_d)|
/// Pairs outside `gate` (squared Mahalanobis) get kForbiddenCost. Columns are
/// the non-empty slots listed in `slots`.
CostMatrix association_costs(const TrackSet& tracks, const core::FrameInput& frame,
                             const std::vector<int>& slots, const SensorModel& sensor,
                             const BaselineConfig& config, double gate);

/// Hungarian with every track and detection free to remain unmatched at a
/// cost above any admissible pair. Returns per robot the matched column or -1.
std::vector<int> match_robots(const CostMatrix& cost);

/// Kalman-HA: tracks start on the first matched detection and end on the
/// first miss.
core::AssignmentLabel kalman_ha_step(TrackSet& tracks, const core::FrameInput& frame,
                                     const SensorModel& sensor, const BaselineConfig& config);

/// Kalman-HA2: tentative tracks confirm after confirm_hits consecutive hits,
/// coast through up to max_misses misses, gate at gate_ha2, and only
/// confirmed tracks label detections.
core::AssignmentLabel kalman_ha2_step(TrackSet& tracks, const core::FrameInput& frame,
                                      const SensorModel& sensor, const BaselineConfig& config);

/// Indices of the non-empty slots of a frame.
std::vector<int> occupied_slots(const core::FrameInput& frame);

}  // namespace robotid::baselines
