// SPDX-License-Identifier: Apache-2.0
#include "robotid/baselines/kalman_ha.hpp"

#include <algorithm>
#include <cmath>

#include "robotid/core/angles.hpp"

namespace robotid::baselines {

namespace {

Eigen::Vector2d position_of(const core::Detection& d) { return {d.x, d.y}; }

// Above every admissible pair cost, far below kForbiddenCost.
double miss_cost(const BaselineConfig& config, double gate) {
  return config.w_position * std::max(std::sqrt(gate), config.new_track_distance) +
         config.w_heading * core::kPi + 1.0;
}

void remember_positions(TrackSet& tracks) {
  for (std::size_t r = 0; r < tracks.tracks.size(); ++r) {
    if (tracks.tracks[r]) tracks.last_position[r] = tracks.tracks[r]->position();
  }
}

void predict_all(TrackSet& tracks, const SensorModel& sensor) {
  for (auto& t : tracks.tracks) {
    if (t) t = kalman_predict(*t, sensor.dt, sensor.q);
  }
}

std::vector<int> match_with_misses(const CostMatrix& cost, double miss) {
  const Eigen::Index n = cost.rows();
  const Eigen::Index d = cost.cols();
  CostMatrix aug = CostMatrix::Constant(n, d + n, kForbiddenCost);
  aug.leftCols(d) = cost;
  for (Eigen::Index r = 0; r < n; ++r) aug(r, d + r) = miss;
  const Assignment a = drop_forbidden(aug, hungarian(aug));
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int c = a.row_to_col[static_cast<std::size_t>(r)];
    if (c >= 0 && c < d) out[static_cast<std::size_t>(r)] = c;
  }
  return out;
}

}  // namespace

std::vector<int> occupied_slots(const core::FrameInput& frame) {
  std::vector<int> out;
  for (std::size_t k = 0; k < frame.slots.size(); ++k) {
    if (!frame.slots[k].empty()) out.push_back(static_cast<int>(k));
  }
  return out;
}

CostMatrix association_costs(const TrackSet& tracks, const core::FrameInput& frame,
                             const std::vector<int>& slots, const SensorModel& sensor,
                             const BaselineConfig& config, double gate) {
  const auto n = static_cast<Eigen::Index>(tracks.tracks.size());
  CostMatrix cost(n, static_cast<Eigen::Index>(slots.size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& track = tracks.tracks[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < slots.size(); ++j) {
      const core::Detection& d = frame.slots[static_cast<std::size_t>(slots[j])];
      const double heading =
          config.w_heading * std::abs(core::angular_diff(frame.broadcasts[static_cast<std::size_t>(r)], d.phi));
      double c = 0.0;
      if (track) {
        const Innovation inn = innovation(*track, position_of(d), sensor.R);
        c = inn.mahalanobis2 > gate ? kForbiddenCost
                                    : config.w_position * std::sqrt(inn.mahalanobis2) + heading;
      } else {
        c = config.w_position * config.new_track_distance + heading;
      }
      cost(r, static_cast<Eigen::Index>(j)) = c;
    }
  }
  return cost;
}

std::vector<int> match_robots(const CostMatrix& cost) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < cost.size(); ++i) {
    if (cost(i) < kForbiddenCost) worst = std::max(worst, cost(i));
  }
  return match_with_misses(cost, worst + 1.0);
}

core::AssignmentLabel kalman_ha_step(TrackSet& tracks, const core::FrameInput& frame,
                                     const SensorModel& sensor, const BaselineConfig& config) {
  predict_all(tracks, sensor);
  const std::vector<int> slots = occupied_slots(frame);
  const CostMatrix cost = association_costs(tracks, frame, slots, sensor, config, config.gate_ha);
  const std::vector<int> match = match_with_misses(cost, miss_cost(config, config.gate_ha));

  core::AssignmentLabel label;
  label.classes.assign(frame.slots.size(), 0);
  for (std::size_t r = 0; r < match.size(); ++r) {
    auto& track = tracks.tracks[r];
    const int j = match[r];
    if (j < 0) {
      track.reset();
      continue;
    }
    const core::Detection& d = frame.slots[static_cast<std::size_t>(slots[static_cast<std::size_t>(j)])];
    if (track) {
      track = kalman_update(*track, position_of(d), sensor.R);
    } else {
      track = kalman_init(position_of(d), sensor.R, sensor.velocity_var, sensor.accel_var);
    }
    track->heading = d.phi;
    ++track->hits;
    track->misses = 0;
    track->confirmed = true;
    label.classes[static_cast<std::size_t>(slots[static_cast<std::size_t>(j)])] = static_cast<int>(r) + 1;
  }
  remember_positions(tracks);
  return label;
}

core::AssignmentLabel kalman_ha2_step(TrackSet& tracks, const core::FrameInput& frame,
                                      const SensorModel& sensor, const BaselineConfig& config) {
  predict_all(tracks, sensor);
  const std::vector<int> slots = occupied_slots(frame);
  const CostMatrix cost = association_costs(tracks, frame, slots, sensor, config, config.gate_ha2);
  const std::vector<int> match = match_with_misses(cost, miss_cost(config, config.gate_ha2));

  core::AssignmentLabel label;
  label.classes.assign(frame.slots.size(), 0);
  for (std::size_t r = 0; r < match.size(); ++r) {
    auto& track = tracks.tracks[r];
    const int j = match[r];
    if (j < 0) {
      if (!track) continue;
      if (!track->confirmed) {
        track.reset();
        continue;
      }
      ++track->misses;
      track->hits = 0;
      if (track->misses > config.max_misses) track.reset();
      continue;
    }
    const int slot = slots[static_cast<std::size_t>(j)];
    const core::Detection& d = frame.slots[static_cast<std::size_t>(slot)];
    if (track) {
      track = kalman_update(*track, position_of(d), sensor.R);
    } else {
      track = kalman_init(position_of(d), sensor.R, sensor.velocity_var, sensor.accel_var);
    }
    track->heading = d.phi;
    ++track->hits;
    track->misses = 0;
    const double err = std::abs(core::angular_diff(frame.broadcasts[r], d.phi));
    track->heading_error = track->age == 0 ? err
                                            : track->heading_error +
                                                  config.heading_check_gain * (err - track->heading_error);
    if (track->confirmed && config.heading_check_limit > 0.0 &&
        track->heading_error > config.heading_check_limit) {
      track.reset();
      continue;
    }
    if (track->hits >= config.confirm_hits) track->confirmed = true;
    if (track->confirmed) label.classes[static_cast<std::size_t>(slot)] = static_cast<int>(r) + 1;
  }
  remember_positions(tracks);
  return label;
}

}  // namespace robotid::baselines
