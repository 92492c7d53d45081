// SPDX-License-Identifier: Apache-2.0
#include "robotid/eval/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace robotid::eval {

double SuccessCounts::rate() const {
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

SuccessCounts& SuccessCounts::operator+=(const SuccessCounts& other) {
  correct += other.correct;
  total += other.total;
  return *this;
}

SuccessCounts count_success(const std::vector<core::AssignmentLabel>& predictions,
                            const std::vector<core::FrameRecord>& frames) {
  if (predictions.size() != frames.size()) {
    throw std::invalid_argument("success_rate: prediction and frame counts differ");
  }
  SuccessCounts out;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& slots = frames[f].input.slots;
    const auto& truth = frames[f].label.classes;
    const auto& pred = predictions[f].classes;
    if (pred.size() != slots.size() || truth.size() != slots.size()) {
      throw std::invalid_argument("success_rate: slot count mismatch");
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (slots[k].empty()) continue;
      ++out.total;
      if (pred[k] == truth[k]) ++out.correct;
    }
  }
  return out;
}

double success_rate(const std::vector<core::AssignmentLabel>& predictions,
                    const std::vector<core::FrameRecord>& frames) {
  return count_success(predictions, frames).rate();
}

double LocalizationSum::mean() const {
  return count == 0 ? 0.0 : metres / static_cast<double>(count);
}

LocalizationSum& LocalizationSum::operator+=(const LocalizationSum& other) {
  metres += other.metres;
  count += other.count;
  return *this;
}

LocalizationSum localization_error(const std::vector<std::vector<Position>>& estimates,
                                   const std::vector<core::FrameRecord>& frames,
                                   double field_width, double field_height) {
  if (estimates.size() != frames.size()) {
    throw std::invalid_argument("localization_error: estimate and frame counts differ");
  }
  LocalizationSum out;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& truth = frames[f].truth;
    if (estimates[f].size() != truth.size()) {
      throw std::invalid_argument("localization_error: robot count mismatch");
    }
    for (std::size_t r = 0; r < truth.size(); ++r) {
      if (!truth[r].present) continue;
      const double dx = (estimates[f][r][0] - truth[r].x) * field_width;
      const double dy = (estimates[f][r][1] - truth[r].y) * field_height;
      out.metres += std::hypot(dx, dy);
      ++out.count;
    }
  }
  return out;
}

double avg_localization_error(const std::vector<std::vector<Position>>& estimates,
                              const std::vector<core::FrameRecord>& frames,
                              double field_width, double field_height) {
  return localization_error(estimates, frames, field_width, field_height).mean();
}

}  // namespace robotid::eval
