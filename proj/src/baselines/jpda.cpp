// SPDX-License-Identifier: Apache-2.0
#include "robotid/baselines/jpda.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "robotid/core/angles.hpp"

namespace robotid::baselines {

namespace {

struct Enumerator {
  const Eigen::MatrixXd& lik;
  const GateMask& gate;
  double pd;
  double clutter;
  JpdaMarginals& out;
  std::vector<int> assign;
  std::vector<char> used;
  double total = 0.0;

  void leaf(double weight) {
    int unused = 0;
    for (char u : used) unused += u ? 0 : 1;
    const double w = weight * std::pow(1.0 - pd, unused);
    if (w == 0.0) return;
    total += w;
    for (std::size_t j = 0; j < assign.size(); ++j) {
      if (assign[j] >= 0) {
        out.beta(assign[j], static_cast<Eigen::Index>(j)) += w;
      } else {
        out.beta_clutter(static_cast<Eigen::Index>(j)) += w;
      }
    }
    for (std::size_t r = 0; r < used.size(); ++r) {
      if (!used[r]) out.beta_miss(static_cast<Eigen::Index>(r)) += w;
    }
  }

  void walk(std::size_t d, double weight) {
    if (d == assign.size()) {
      leaf(weight);
      return;
    }
    const auto col = static_cast<Eigen::Index>(d);
    assign[d] = -1;
    walk(d + 1, weight * clutter);
    for (std::size_t r = 0; r < used.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      if (used[r] || !gate(row, col)) continue;
      used[r] = 1;
      assign[d] = static_cast<int>(r);
      walk(d + 1, weight * pd * lik(row, col));
      used[r] = 0;
    }
    assign[d] = -1;
  }
};

double heading_likelihood(double broadcast, double phi, double sigma) {
  const double e = core::angular_diff(broadcast, phi) / sigma;
  return std::exp(-0.5 * e * e) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

// Beta-weighted position update over all gated detections.
KalmanTrack pda_update(const KalmanTrack& track, const std::vector<Eigen::Vector2d>& z,
                       const Eigen::VectorXd& beta, double beta_none, const MeasurementNoise& R) {
  Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const Eigen::Matrix2d S = track.P.topLeftCorner<2, 2>() + R;
  const Eigen::Matrix<double, 6, 2> K = track.P * h.transpose() * S.inverse();
  Eigen::Vector2d nu = Eigen::Vector2d::Zero();
  Eigen::Matrix2d spread = Eigen::Matrix2d::Zero();
  for (std::size_t j = 0; j < z.size(); ++j) {
    const Eigen::Vector2d v = z[j] - track.x.head<2>();
    const double b = beta(static_cast<Eigen::Index>(j));
    nu += b * v;
    spread += b * v * v.transpose();
  }
  spread -= nu * nu.transpose();
  KalmanTrack out = track;
  out.x = track.x + K * nu;
  const KalmanCovariance pc = track.P - K * S * K.transpose();
  out.P = beta_none * track.P + (1.0 - beta_none) * pc + K * spread * K.transpose();
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  return out;
}

}  // namespace

JpdaMarginals jpda_marginals(const Eigen::MatrixXd& likelihood, const GateMask& gate,
                             double p_detect, double clutter_density) {
  const Eigen::Index n = likelihood.rows();
  const Eigen::Index d = likelihood.cols();
  if (n > kJpdaMaxTracks || d > kJpdaMaxDetections) {
    throw std::invalid_argument("jpda: problem too large for exact enumeration");
  }
  if (gate.rows() != n || gate.cols() != d) throw std::invalid_argument("jpda: gate shape mismatch");
  if (!(p_detect >= 0.0 && p_detect <= 1.0)) throw std::invalid_argument("jpda: p_detect outside [0, 1]");
  if (!(clutter_density >= 0.0)) throw std::invalid_argument("jpda: negative clutter density");
  if (!likelihood.allFinite() || (likelihood.array() < 0.0).any()) {
    throw std::invalid_argument("jpda: likelihoods must be finite and non-negative");
  }

  JpdaMarginals out;
  out.beta = Eigen::MatrixXd::Zero(n, d);
  out.beta_clutter = Eigen::VectorXd::Zero(d);
  out.beta_miss = Eigen::VectorXd::Zero(n);
  Enumerator e{likelihood, gate, p_detect, clutter_density, out,
               std::vector<int>(static_cast<std::size_t>(d), -1),
               std::vector<char>(static_cast<std::size_t>(n), 0)};
  e.walk(0, 1.0);

  if (e.total > 0.0 && std::isfinite(e.total)) {
    out.beta /= e.total;
    out.beta_clutter /= e.total;
    out.beta_miss /= e.total;
    return out;
  }
  out.degenerate = true;
  out.beta.setZero();
  out.beta_clutter.setZero();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double options = 1.0 + static_cast<double>(gate.col(j).count());
    for (Eigen::Index r = 0; r < n; ++r) {
      if (gate(r, j)) out.beta(r, j) = 1.0 / options;
    }
    out.beta_clutter(j) = 1.0 / options;
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    out.beta_miss(r) = std::max(0.0, 1.0 - out.beta.row(r).sum());
  }
  return out;
}

JpdaStepResult jpda_step(TrackSet& tracks, const core::FrameInput& frame, const SensorModel& sensor,
                         const BaselineConfig& config) {
  for (auto& t : tracks.tracks) {
    if (t) t = kalman_predict(*t, sensor.dt, sensor.q);
  }
  JpdaStepResult result;
  result.slots = occupied_slots(frame);
  const auto n = static_cast<Eigen::Index>(tracks.tracks.size());
  const auto d = static_cast<Eigen::Index>(result.slots.size());

  std::vector<Eigen::Vector2d> z;
  z.reserve(result.slots.size());
  for (int s : result.slots) {
    const auto& det = frame.slots[static_cast<std::size_t>(s)];
    z.emplace_back(det.x, det.y);
  }

  Eigen::MatrixXd lik = Eigen::MatrixXd::Zero(n, d);
  GateMask gate = GateMask::Constant(n, d, false);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& track = tracks.tracks[static_cast<std::size_t>(r)];
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& det = frame.slots[static_cast<std::size_t>(result.slots[static_cast<std::size_t>(j)])];
      const double lh = heading_likelihood(frame.broadcasts[static_cast<std::size_t>(r)], det.phi,
                                           sensor.sigma_phi);
      if (track) {
        const Innovation inn = innovation(*track, z[static_cast<std::size_t>(j)], sensor.R);
        if (inn.mahalanobis2 > config.gate_jpda) continue;
        gate(r, j) = true;
        lik(r, j) = innovation_likelihood(inn) * lh;
      } else {
        // Unit position density: uniform over the normalized field.
        gate(r, j) = true;
        lik(r, j) = lh;
      }
    }
  }
  result.marginals = jpda_marginals(lik, gate, sensor.p_detect, sensor.clutter_density);
  const JpdaMarginals& m = result.marginals;

  for (Eigen::Index r = 0; r < n; ++r) {
    auto& track = tracks.tracks[static_cast<std::size_t>(r)];
    if (track) {
      const Eigen::VectorXd b = m.beta.row(r).transpose();
      const double assoc = b.sum();
      if (assoc > 0.0) {
        track = pda_update(*track, z, b, 1.0 - assoc, sensor.R);
        ++track->hits;
        track->misses = 0;
      } else {
        ++track->misses;
      }
      const double sx = std::sqrt(track->P(0, 0)) * sensor.field_width;
      const double sy = std::sqrt(track->P(1, 1)) * sensor.field_height;
      if (!(sx <= config.max_position_sigma && sy <= config.max_position_sigma)) track.reset();
    } else if (d > 0) {
      Eigen::Index best = 0;
      const double top = m.beta.row(r).maxCoeff(&best);
      if (top >= 0.5) {
        track = kalman_init(z[static_cast<std::size_t>(best)], sensor.R, sensor.velocity_var,
                            sensor.accel_var);
        track->hits = 1;
        track->confirmed = true;
      }
    }
    if (track) {
      tracks.last_position[static_cast<std::size_t>(r)] = track->position();
    }
  }

  result.label.classes.assign(frame.slots.size(), 0);
  if (d > 0) {
    constexpr double kTiny = 1e-300;
    CostMatrix cost = CostMatrix::Constant(n + d, d, kForbiddenCost);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index j = 0; j < d; ++j) {
        if (gate(r, j)) cost(r, j) = -std::log(std::max(m.beta(r, j), kTiny));
      }
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      cost(n + j, j) = -std::log(std::max(m.beta_clutter(j), kTiny));
    }
    const Assignment a = hungarian(cost);
    for (Eigen::Index r = 0; r < n; ++r) {
      const int c = a.row_to_col[static_cast<std::size_t>(r)];
      if (c >= 0 && cost(r, c) < kForbiddenCost) {
        result.label.classes[static_cast<std::size_t>(result.slots[static_cast<std::size_t>(c)])] =
            static_cast<int>(r) + 1;
      }
    }
  }
  return result;
}

}  // namespace robotid::baselines
