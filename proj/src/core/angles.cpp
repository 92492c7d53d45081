// SPDX-License-Identifier: Apache-2.0
#include "robotid/core/angles.hpp"

#include <cmath>
#include <stdexcept>

namespace robotid::core {

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("wrap_angle: non-finite angle");
  }
  double r = std::fmod(theta + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  // fmod + shift can land exactly on +pi after rounding.
  if (r >= kPi) r -= kTwoPi;
  return r;
}

double angular_diff(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("angular_diff: non-finite angle");
  }
  return wrap_angle(a - b);
}

}  // namespace robotid::core
