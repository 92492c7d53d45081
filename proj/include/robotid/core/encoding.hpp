// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "robotid/core/types.hpp"

namespace robotid::core {

/// Number of observed quantities per detection besides gamma (x, y, phi).
inline constexpr int kDetectionDims = 3;

/// Length of the flat network input: N + M * (D + 1).
constexpr int input_length(int n_robots, int n_slots) {
  return n_robots + n_slots * (kDetectionDims + 1);
}

/// Flattens a frame into [broadcast phi/pi ...] ++ per slot [x, y, phi/pi, gamma].
/// Empty slots encode as four zeros. Throws if the slot or broadcast count
/// differs from (n_robots, n_slots).
std::vector<double> encode_frame(const FrameInput& frame, int n_robots, int n_slots);

/// Writes the encoding into a caller-owned buffer of length input_length().
void encode_frame_into(const FrameInput& frame, int n_robots, int n_slots,
                       std::span<double> out);

}  // namespace robotid::core
