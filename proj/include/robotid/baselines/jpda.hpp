// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "robotid/baselines/config.hpp"
#include "robotid/baselines/kalman_ha.hpp"
#include "robotid/core/types.hpp"

namespace robotid::baselines {

inline constexpr int kJpdaMaxTracks = 7;
inline constexpr int kJpdaMaxDetections = 10;

using GateMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct JpdaMarginals {
  Eigen::MatrixXd beta;          // tracks x detections
  Eigen::VectorXd beta_clutter;  // per detection
  Eigen::VectorXd beta_miss;     // per track: probability of no detection
  bool degenerate = false;       // total event likelihood was zero; uniform fallback
};

/// Exact marginals over every feasible joint event (each detection to at most
/// one track, each track to at most one detection, only gated pairs). Event
/// weight: prod(P_D * L) over matched pairs * clutter_density per unmatched
/// detection * (1 - P_D) per unmatched track. Enumerates all events, so sizes
/// are capped at kJpdaMaxTracks x kJpdaMaxDetections.
JpdaMarginals jpda_marginals(const Eigen::MatrixXd& likelihood, const GateMask& gate,
                             double p_detect, double clutter_density);

struct JpdaStepResult {
  JpdaMarginals marginals;
  std::vector<int> slots;  // detection column -> frame slot
  core::AssignmentLabel label;
};

/// One JPDA frame: predict, compute position x heading likelihoods against
/// the broadcasts, marginalize, apply beta-weighted updates, and label via
/// Hungarian on -log beta (with a clutter option per detection).
JpdaStepResult jpda_step(TrackSet& tracks, const core::FrameInput& frame,
                         const SensorModel& sensor, const BaselineConfig& config);

}  // namespace robotid::baselines
