// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <utility>
#include <vector>

#include "robotid/core/types.hpp"

namespace robotid::sim {

using Rng = std::mt19937_64;

/// Generator settings. Distances are in metres, angles in radians, rates per
/// frame unless noted.
struct SimConfig {
  int n_robots = 2;
  int n_slots = 3;
  double field_width = 9.0;
  double field_height = 6.0;
  double frame_rate = 30.0;

  // Detector noise. More error along x than y.
  double sigma_x = 0.30;
  double sigma_y = 0.15;
  double sigma_phi = 0.30;  // ~17 degrees
  // Per-frame AR(1) coefficient of the position error; projection errors
  // drift slowly rather than redrawing every frame. 0 gives white noise.
  double position_noise_correlation = 0.97;
  double p_fn = 0.1;
  double p_fp = 0.3;  // expected clutter detections per frame

  // Occlusion events per visible robot per frame; durations in frames.
  double occlusion_rate = 0.001;
  int occlusion_min = 15;
  int occlusion_max = 300;
  double broadcast_dropout = 0.05;

  // Motion: Ornstein-Uhlenbeck accelerations, clamped speeds.
  double v_max = 0.6;          // m/s
  double accel_sigma = 0.5;    // stationary std of linear acceleration, m/s^2
  double accel_tau = 1.0;      // s
  double omega_max = 1.5;      // rad/s
  double angular_accel_sigma = 1.5;  // rad/s^2
  double angular_tau = 1.0;    // s

  // Detector confidence: Beta(a, b) for true detections and for clutter.
  double gamma_true_a = 8.0;
  double gamma_true_b = 2.0;
  double gamma_clutter_a = 2.0;
  double gamma_clutter_b = 5.0;

  std::uint64_t seed = 1;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  [[nodiscard]] core::SequenceMeta meta() const;
};

struct RobotState {
  double x = 0.0, y = 0.0;    // metres
  double vx = 0.0, vy = 0.0;  // m/s
  double ax = 0.0, ay = 0.0;  // m/s^2
  double phi = 0.0;           // rad
  double omega = 0.0;         // rad/s
  double alpha = 0.0;         // rad/s^2
  bool visible = true;
  std::int64_t occluded_until = 0;
  double broadcast = 0.0;     // last heading received over the radio
  double noise_x = 0.0;       // standardized position error state
  double noise_y = 0.0;
};

struct WorldState {
  std::int64_t t = 0;
  std::vector<RobotState> robots;
};

/// Random initial world: uniform poses, random sub-maximal velocities.
WorldState initial_world(const SimConfig& config, Rng& rng);

/// Advances the world by one frame.
WorldState step_world(const WorldState& state, const SimConfig& config, Rng& rng);

/// Renders what the detector and radio deliver for the current world state.
std::pair<core::FrameInput, core::AssignmentLabel> observe(const WorldState& state,
                                                           const SimConfig& config, Rng& rng);

/// Ground-truth poses in normalized field coordinates.
std::vector<core::RobotPose> truth_poses(const WorldState& state, const SimConfig& config);

core::SequenceRecord generate_sequence(const SimConfig& config, std::int64_t length, Rng& rng);

/// Seed for sequence `index` of a dataset generated from `master_seed`.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Writes n_sequences files plus "manifest.txt" into out_dir and returns the
/// manifest path. Each sequence uses derive_seed(config.seed, i).
std::filesystem::path generate_dataset(const SimConfig& config, int n_sequences,
                                       std::int64_t length,
                                       const std::filesystem::path& out_dir);

}  // namespace robotid::sim
