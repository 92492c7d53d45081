// SPDX-License-Identifier: Apache-2.0
#include "robotid/core/encoding.hpp"

#include <stdexcept>
#include <string>

#include "robotid/core/angles.hpp"

namespace robotid::core {

void encode_frame_into(const FrameInput& frame, int n_robots, int n_slots,
                       std::span<double> out) {
  if (static_cast<int>(frame.slots.size()) != n_slots) {
    throw std::invalid_argument("encode_frame: expected " + std::to_string(n_slots) +
                                " slots, got " + std::to_string(frame.slots.size()));
  }
  if (static_cast<int>(frame.broadcasts.size()) != n_robots) {
    throw std::invalid_argument("encode_frame: expected " + std::to_string(n_robots) +
                                " broadcasts, got " +
                                std::to_string(frame.broadcasts.size()));
  }
  if (static_cast<int>(out.size()) != input_length(n_robots, n_slots)) {
    throw std::invalid_argument("encode_frame: output buffer has wrong length");
  }
  std::size_t k = 0;
  for (double heading : frame.broadcasts) out[k++] = heading / kPi;
  for (const Detection& d : frame.slots) {
    if (d.empty()) {
      out[k++] = 0.0;
      out[k++] = 0.0;
      out[k++] = 0.0;
      out[k++] = 0.0;
    } else {
      out[k++] = d.x;
      out[k++] = d.y;
      out[k++] = d.phi / kPi;
      out[k++] = d.gamma;
    }
  }
}

std::vector<double> encode_frame(const FrameInput& frame, int n_robots, int n_slots) {
  std::vector<double> out(static_cast<std::size_t>(input_length(n_robots, n_slots)));
  encode_frame_into(frame, n_robots, n_slots, out);
  return out;
}

}  // namespace robotid::core
