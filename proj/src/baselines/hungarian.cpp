// SPDX-License-Identifier: Apache-2.0
#include "robotid/baselines/hungarian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace robotid::baselines {

namespace {

// Shortest-augmenting-path Hungarian with potentials for rows <= cols.
// Returns row -> column.
std::vector<int> solve_wide(const CostMatrix& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = a(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[static_cast<std::size_t>(j)] != 0) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

std::vector<int> solve_any(const CostMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return std::vector<int>(static_cast<std::size_t>(a.rows()), -1);
  if (a.rows() <= a.cols()) return solve_wide(a);
  const std::vector<int> col_to_row = solve_wide(a.transpose());
  std::vector<int> row_to_col(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t c = 0; c < col_to_row.size(); ++c) {
    if (col_to_row[c] >= 0) row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<int>(c);
  }
  return row_to_col;
}

double assignment_cost(const CostMatrix& a, const std::vector<int>& row_to_col) {
  double s = 0.0;
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    if (row_to_col[r] >= 0) s += a(static_cast<Eigen::Index>(r), row_to_col[r]);
  }
  return s;
}

// Optimal cost over the given rows and columns of `a`.
double sub_optimum(const CostMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  CostMatrix sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(rows[i], cols[j]);
  }
  return assignment_cost(sub, solve_any(sub));
}

}  // namespace

Assignment hungarian(const CostMatrix& cost) {
  if (!cost.allFinite()) throw std::invalid_argument("hungarian: non-finite cost entry");
  Assignment out;
  const int n_rows = static_cast<int>(cost.rows());
  const int n_cols = static_cast<int>(cost.cols());
  out.row_to_col.assign(static_cast<std::size_t>(n_rows), -1);
  if (n_rows == 0 || n_cols == 0) return out;

  const std::vector<int> optimal = solve_any(cost);
  const double opt = assignment_cost(cost, optimal);
  const double tol = 1e-9 * (1.0 + std::abs(opt));

  // Walk rows in order and take the smallest column (or "unassigned", ranked
  // last) that still admits an optimal completion.
  std::vector<char> col_free(static_cast<std::size_t>(n_cols), 1);
  double fixed = 0.0;
  int unassigned_budget = std::max(0, n_rows - n_cols);
  for (int i = 0; i < n_rows; ++i) {
    std::vector<int> rest_rows;
    for (int r = i + 1; r < n_rows; ++r) rest_rows.push_back(r);
    int chosen = -2;
    for (int j = 0; j < n_cols && chosen == -2; ++j) {
      if (!col_free[static_cast<std::size_t>(j)]) continue;
      std::vector<int> rest_cols;
      for (int c = 0; c < n_cols; ++c) {
        if (c != j && col_free[static_cast<std::size_t>(c)]) rest_cols.push_back(c);
      }
      const double total = fixed + cost(i, j) + sub_optimum(cost, rest_rows, rest_cols);
      if (total <= opt + tol) chosen = j;
    }
    if (chosen == -2) {
      if (unassigned_budget <= 0) {
        // Numerical corner: fall back to the solver's own choice.
        chosen = optimal[static_cast<std::size_t>(i)];
        if (chosen >= 0 && !col_free[static_cast<std::size_t>(chosen)]) chosen = -1;
      } else {
        chosen = -1;
      }
    }
    if (chosen >= 0) {
      col_free[static_cast<std::size_t>(chosen)] = 0;
      fixed += cost(i, chosen);
    } else {
      --unassigned_budget;
    }
    out.row_to_col[static_cast<std::size_t>(i)] = chosen;
  }
  out.cost = assignment_cost(cost, out.row_to_col);
  return out;
}

Assignment drop_forbidden(const CostMatrix& cost, Assignment a) {
  for (std::size_t r = 0; r < a.row_to_col.size(); ++r) {
    const int c = a.row_to_col[r];
    if (c >= 0 && cost(static_cast<Eigen::Index>(r), c) >= kForbiddenCost) a.row_to_col[r] = -1;
  }
  a.cost = assignment_cost(cost, a.row_to_col);
  return a;
}

}  // namespace robotid::baselines
