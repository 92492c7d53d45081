// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

namespace robotid::baselines {

/// Rows are tracks or robots, columns are detections. Rectangular is fine.
using CostMatrix = Eigen::MatrixXd;

/// Cost marking a pair that must not be matched.
inline constexpr double kForbiddenCost = 1e9;

struct Assignment {
  std::vector<int> row_to_col;  // -1 when the row is left unassigned
  double cost = 0.0;            // sum over assigned rows, in row order
};

/// Minimum-cost assignment of min(rows, cols) pairs. Among optimal
/// assignments the lexicographically smallest row_to_col is returned, so the
/// result does not depend on solver internals. An empty matrix yields an
/// empty assignment. Throws std::invalid_argument on non-finite entries.
Assignment hungarian(const CostMatrix& cost);

/// Clears pairs whose cost is at or above kForbiddenCost and recomputes cost.
Assignment drop_forbidden(const CostMatrix& cost, Assignment a);

}  // namespace robotid::baselines
