// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "robotid/baselines/kalman.hpp"
#include "robotid/core/types.hpp"

namespace robotid::baselines {

/// Tuning shared by the classical trackers. Physical quantities are in
/// metres and seconds; they are converted to normalized field units with the
/// sequence metadata.
struct BaselineConfig {
  double w_position = 1.0;     // weight on Mahalanobis distance
  double w_heading = 0.5;      // weight on |heading difference| (rad)
  double jerk_density = 0.5;   // m^2 / s^5
  double init_velocity_sigma = 0.3;  // m/s
  double init_accel_sigma = 0.5;     // m/s^2
  double new_track_distance = 3.0;   // position term for a robot without a track
  double gate_ha = 13.816;     // chi2(2), p = 0.999
  double gate_ha2 = 5.991;     // chi2(2), p = 0.95
  int confirm_hits = 3;
  int max_misses = 15;
  // Kalman-HA2 drops a confirmed track whose running mean of
  // |broadcast - detected heading| (gain heading_check_gain) exceeds
  // heading_check_limit radians. A limit <= 0 disables the check.
  double heading_check_gain = 0.1;
  double heading_check_limit = 0.8;
  double gate_jpda = 9.210;    // chi2(2), p = 0.99
  double max_position_sigma = 2.0;  // m; JPDA tracks beyond this are dropped

  void validate() const;
};

/// Sequence-derived quantities the trackers need.
struct SensorModel {
  double dt = 1.0 / 30.0;
  MeasurementNoise R = MeasurementNoise::Identity();
  ProcessNoise q;
  double velocity_var = 0.0;
  double accel_var = 0.0;
  double sigma_phi = 0.3;
  double p_detect = 0.9;
  double clutter_density = 0.3;  // per unit normalized area and radian of heading
  double field_width = 1.0;
  double field_height = 1.0;
};

SensorModel make_sensor_model(const core::SequenceMeta& meta, const BaselineConfig& config);

}  // namespace robotid::baselines
