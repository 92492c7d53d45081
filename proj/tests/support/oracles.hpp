// SPDX-License-Identifier: Apache-2.0
// Straight-line reference implementations used as test oracles. They share
// no code with the library beyond the storage layout of the weights.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace robotid::oracle {

struct ReferenceCell {
  std::vector<double> h;
  std::vector<double> c;
};

// One LSTM step written gate by gate with scalar loops. Wx is 4H x D and Wh
// is 4H x H, stacked as input, forget, output, candidate blocks.
inline ReferenceCell reference_lstm_cell(const Eigen::MatrixXd& Wx, const Eigen::MatrixXd& Wh,
                                         const Eigen::VectorXd& b, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& h, const Eigen::VectorXd& c) {
  const long H = h.size();
  auto pre = [&](long gate, long unit) {
    const long row = gate * H + unit;
    double s = b(row);
    for (long j = 0; j < x.size(); ++j) s += Wx(row, j) * x(j);
    for (long j = 0; j < H; ++j) s += Wh(row, j) * h(j);
    return s;
  };
  auto sig = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  ReferenceCell out{std::vector<double>(static_cast<std::size_t>(H)),
                    std::vector<double>(static_cast<std::size_t>(H))};
  for (long u = 0; u < H; ++u) {
    const double i = sig(pre(0, u));
    const double f = sig(pre(1, u));
    const double o = sig(pre(2, u));
    const double g = std::tanh(pre(3, u));
    const double cn = f * c(u) + i * g;
    out.c[static_cast<std::size_t>(u)] = cn;
    out.h[static_cast<std::size_t>(u)] = o * std::tanh(cn);
  }
  return out;
}

// Minimum total cost over all ways of pairing min(rows, cols) rows and columns.
inline double brute_force_min_cost(const Eigen::MatrixXd& cost) {
  const long r = cost.rows();
  const long c = cost.cols();
  if (r == 0 || c == 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (r <= c) {
    std::vector<int> cols(static_cast<std::size_t>(c));
    std::iota(cols.begin(), cols.end(), 0);
    do {
      double s = 0.0;
      for (long i = 0; i < r; ++i) s += cost(i, cols[static_cast<std::size_t>(i)]);
      best = std::min(best, s);
    } while (std::next_permutation(cols.begin(), cols.end()));
  } else {
    std::vector<int> rows(static_cast<std::size_t>(r));
    std::iota(rows.begin(), rows.end(), 0);
    do {
      double s = 0.0;
      for (long j = 0; j < c; ++j) s += cost(rows[static_cast<std::size_t>(j)], j);
      best = std::min(best, s);
    } while (std::next_permutation(rows.begin(), rows.end()));
  }
  return best;
}

struct ReferenceMarginals {
  Eigen::MatrixXd beta;
  Eigen::VectorXd clutter;
  Eigen::VectorXd miss;
};

// Enumerates every map detection -> {clutter, track 0..T-1} by counting in
// base T+1, keeps the feasible ones and accumulates normalized weights.
inline ReferenceMarginals brute_force_jpda(const Eigen::MatrixXd& L,
                                           const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& gate,
                                           double pd, double clutter) {
  const long T = L.rows();
  const long D = L.cols();
  ReferenceMarginals m{Eigen::MatrixXd::Zero(T, D), Eigen::VectorXd::Zero(D),
                       Eigen::VectorXd::Zero(T)};
  long events = 1;
  for (long d = 0; d < D; ++d) events *= T + 1;
  double total = 0.0;
  std::vector<long> choice(static_cast<std::size_t>(D));
  for (long e = 0; e < events; ++e) {
    long code = e;
    for (long d = 0; d < D; ++d) {
      choice[static_cast<std::size_t>(d)] = code % (T + 1) - 1;  // -1 = clutter
      code /= T + 1;
    }
    std::vector<int> used(static_cast<std::size_t>(T), 0);
    bool ok = true;
    double w = 1.0;
    for (long d = 0; d < D && ok; ++d) {
      const long t = choice[static_cast<std::size_t>(d)];
      if (t < 0) {
        w *= clutter;
        continue;
      }
      if (!gate(t, d) || used[static_cast<std::size_t>(t)]++) ok = false;
      else w *= pd * L(t, d);
    }
    if (!ok) continue;
    for (long t = 0; t < T; ++t) {
      if (!used[static_cast<std::size_t>(t)]) w *= 1.0 - pd;
    }
    total += w;
    for (long d = 0; d < D; ++d) {
      const long t = choice[static_cast<std::size_t>(d)];
      if (t < 0) m.clutter(d) += w;
      else m.beta(t, d) += w;
    }
    for (long t = 0; t < T; ++t) {
      if (!used[static_cast<std::size_t>(t)]) m.miss(t) += w;
    }
  }
  m.beta /= total;
  m.clutter /= total;
  m.miss /= total;
  return m;
}

}  // namespace robotid::oracle
