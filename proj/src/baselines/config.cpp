// SPDX-License-Identifier: Apache-2.0
#include "robotid/baselines/config.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace robotid::baselines {

void BaselineConfig::validate() const {
  if (w_position < 0.0 || w_heading < 0.0) throw std::invalid_argument("BaselineConfig: negative weight");
  if (jerk_density < 0.0) throw std::invalid_argument("BaselineConfig: negative jerk density");
  if (gate_ha <= 0.0 || gate_ha2 <= 0.0 || gate_jpda <= 0.0) {
    throw std::invalid_argument("BaselineConfig: gates must be positive");
  }
  if (confirm_hits < 1 || max_misses < 0) throw std::invalid_argument("BaselineConfig: bad track heuristics");
  if (!(heading_check_gain > 0.0 && heading_check_gain <= 1.0)) {
    throw std::invalid_argument("BaselineConfig: heading_check_gain must be in (0, 1]");
  }
  if (max_position_sigma <= 0.0) throw std::invalid_argument("BaselineConfig: max_position_sigma must be positive");
}

SensorModel make_sensor_model(const core::SequenceMeta& meta, const BaselineConfig& config) {
  config.validate();
  SensorModel s;
  const double w = meta.field_width;
  const double h = meta.field_height;
  s.field_width = w;
  s.field_height = h;
  s.dt = 1.0 / meta.frame_rate;
  // Keep R invertible on noise-free data.
  const double sx = std::max(meta.sigma_x / w, 1e-6);
  const double sy = std::max(meta.sigma_y / h, 1e-6);
  s.R = MeasurementNoise::Zero();
  s.R(0, 0) = sx * sx;
  s.R(1, 1) = sy * sy;
  s.q = {config.jerk_density / (w * w), config.jerk_density / (h * h)};
  const double v = config.init_velocity_sigma;
  const double a = config.init_accel_sigma;
  s.velocity_var = v * v / (0.5 * (w * w + h * h));
  s.accel_var = a * a / (0.5 * (w * w + h * h));
  s.sigma_phi = std::max(meta.sigma_phi, 1e-3);
  s.p_detect = 1.0 - meta.p_fn;
  // Clutter is uniform over the unit square and over heading.
  s.clutter_density = meta.p_fp / (2.0 * std::numbers::pi);
  return s;
}

}  // namespace robotid::baselines
