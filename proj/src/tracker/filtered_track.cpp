// SPDX-License-Identifier: Apache-2.0
#include "robotid/tracker/filtered_track.hpp"

#include <stdexcept>

namespace robotid::tracker {

FilteredTrack low_pass(const FilteredTrack& track, double lx, double ly, double alpha,
                       std::int64_t t) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("low_pass: alpha outside [0, 1]");
  FilteredTrack out = track;
  const double a = track.initialized ? alpha : 1.0;
  out.x = a * lx + (1.0 - a) * track.x;
  out.y = a * ly + (1.0 - a) * track.y;
  out.alpha = alpha;
  out.last_update = t;
  out.initialized = true;
  return out;
}

LowPassTracker::LowPassTracker(int n_robots) {
  if (n_robots < 1) throw std::invalid_argument("LowPassTracker: need at least one robot");
  tracks_.resize(static_cast<std::size_t>(n_robots));
}

void LowPassTracker::update(const core::FrameInput& frame, const std::vector<int>& robot_slot,
                            const std::vector<double>& robot_prob) {
  if (robot_slot.size() != tracks_.size() || robot_prob.size() != tracks_.size()) {
    throw std::invalid_argument("LowPassTracker: one slot and probability per robot expected");
  }
  for (std::size_t j = 0; j < tracks_.size(); ++j) {
    const int k = robot_slot[j];
    if (k < 0) continue;
    if (static_cast<std::size_t>(k) >= frame.slots.size()) {
      throw std::invalid_argument("LowPassTracker: slot index out of range");
    }
    const core::Detection& d = frame.slots[static_cast<std::size_t>(k)];
    if (d.empty()) throw std::invalid_argument("LowPassTracker: assigned slot is empty");
    tracks_[j] = low_pass(tracks_[j], d.x, d.y, robot_prob[j], frame.t);
  }
}

void LowPassTracker::reset() {
  for (auto& t : tracks_) t = FilteredTrack{};
}

}  // namespace robotid::tracker
