// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace robotid::core {

/// One detector output in normalized egocentric coordinates.
/// gamma == 0 marks an empty slot; x, y and phi are then zero.
struct Detection {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;    // radians, [-pi, pi)
  double gamma = 0.0;  // detector confidence, [0, 1]

  [[nodiscard]] bool empty() const { return gamma == 0.0; }
  friend bool operator==(const Detection&, const Detection&) = default;
};

/// One timestep of observable input: broadcast headings (radians, one per
/// robot) and exactly M detection slots in arbitrary order.
struct FrameInput {
  std::int64_t t = 0;
  std::vector<double> broadcasts;
  std::vector<Detection> slots;

  friend bool operator==(const FrameInput&, const FrameInput&) = default;
};

/// Class per detection slot: 0 = false positive / empty, r in 1..N = robot r.
struct AssignmentLabel {
  std::vector<int> classes;

  friend bool operator==(const AssignmentLabel&, const AssignmentLabel&) = default;
};

/// Ground-truth pose of one robot in normalized field coordinates.
struct RobotPose {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;
  bool present = false;  // inside the field of view and not occluded

  friend bool operator==(const RobotPose&, const RobotPose&) = default;
};

struct FrameRecord {
  FrameInput input;
  AssignmentLabel label;
  std::vector<RobotPose> truth;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

/// Parameters of the generating process that downstream consumers need:
/// shapes, physical field size and the noise model.
struct SequenceMeta {
  int n_robots = 2;
  int n_slots = 3;
  double field_width = 9.0;   // metres
  double field_height = 6.0;  // metres
  double frame_rate = 30.0;   // Hz
  double sigma_x = 0.30;      // metres
  double sigma_y = 0.15;      // metres
  double sigma_phi = 0.30;    // radians
  double p_fn = 0.1;
  double p_fp = 0.3;
  std::uint64_t seed = 0;

  [[nodiscard]] int n_classes() const { return n_robots + 1; }
  friend bool operator==(const SequenceMeta&, const SequenceMeta&) = default;
};

struct SequenceRecord {
  SequenceMeta meta;
  std::vector<FrameRecord> frames;

  friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

/// Throws std::invalid_argument if the frame violates the Detection,
/// FrameInput or AssignmentLabel invariants for the given shape.
void validate_frame(const FrameRecord& frame, int n_robots, int n_slots);

/// Validates every frame plus contiguity of t.
void validate_sequence(const SequenceRecord& record);

}  // namespace robotid::core
