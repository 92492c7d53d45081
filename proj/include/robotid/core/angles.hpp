// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

namespace robotid::core {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps an angle onto the half-open interval [-pi, pi).
/// Throws std::invalid_argument for NaN or infinite input.
double wrap_angle(double theta);

/// Signed geodesic difference a - b on the circle, in [-pi, pi).
double angular_diff(double a, double b);

}  // namespace robotid::core
