// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "robotid/core/types.hpp"

namespace robotid::eval {

/// Correct assignments over non-empty detection slots. Summable.
struct SuccessCounts {
  long correct = 0;
  long total = 0;
  /// correct / total; 0 when there were no detections.
  [[nodiscard]] double rate() const;
  SuccessCounts& operator+=(const SuccessCounts& other);
  friend bool operator==(const SuccessCounts&, const SuccessCounts&) = default;
};

/// Counts, over every non-empty slot, whether the predicted class equals the
/// true class (clutter included, as class 0). Throws std::invalid_argument if
/// frame or slot counts disagree.
SuccessCounts count_success(const std::vector<core::AssignmentLabel>& predictions,
                            const std::vector<core::FrameRecord>& frames);

/// count_success(...).rate().
double success_rate(const std::vector<core::AssignmentLabel>& predictions,
                    const std::vector<core::FrameRecord>& frames);

/// Normalized (x, y) estimate of one robot.
using Position = std::array<double, 2>;

/// Estimate reported before a method has any information about a robot.
inline constexpr Position kFieldCentre = {0.5, 0.5};

/// Sum of Euclidean errors in metres over (frame, present robot) pairs.
struct LocalizationSum {
  double metres = 0.0;
  long count = 0;
  /// Mean error; 0 when nothing was present.
  [[nodiscard]] double mean() const;
  LocalizationSum& operator+=(const LocalizationSum& other);
};

/// `estimates[f][r]` is robot r's normalized position at frame f. Errors are
/// denormalized with the field size. Throws std::invalid_argument on shape
/// mismatch.
LocalizationSum localization_error(const std::vector<std::vector<Position>>& estimates,
                                   const std::vector<core::FrameRecord>& frames,
                                   double field_width, double field_height);

/// Mean of localization_error.
double avg_localization_error(const std::vector<std::vector<Position>>& estimates,
                              const std::vector<core::FrameRecord>& frames,
                              double field_width, double field_height);

}  // namespace robotid::eval
