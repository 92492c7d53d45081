// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace robotid::baselines {

using KalmanState = Eigen::Matrix<double, 6, 1>;       // x, y, vx, vy, ax, ay
using KalmanCovariance = Eigen::Matrix<double, 6, 6>;
using MeasurementNoise = Eigen::Matrix2d;

/// Constant-acceleration track in normalized field units.
struct KalmanTrack {
  KalmanState x = KalmanState::Zero();
  KalmanCovariance P = KalmanCovariance::Identity();
  double heading = 0.0;
  int age = 0;
  int misses = 0;
  int hits = 0;
  bool confirmed = false;
  double heading_error = 0.0;  // running mean |broadcast - detected heading|

  [[nodiscard]] Eigen::Vector2d position() const { return x.head<2>(); }
};

/// White-noise-jerk spectral density per axis (normalized units^2 / s^5).
struct ProcessNoise {
  double qx = 0.0;
  double qy = 0.0;
};

Eigen::Matrix<double, 6, 6> transition_matrix(double dt);
Eigen::Matrix<double, 6, 6> process_noise(double dt, const ProcessNoise& q);

/// New track at a measured position with zero velocity and acceleration.
KalmanTrack kalman_init(const Eigen::Vector2d& z, const MeasurementNoise& R,
                        double velocity_var, double accel_var);

/// Throws std::invalid_argument unless dt > 0.
KalmanTrack kalman_predict(const KalmanTrack& track, double dt, const ProcessNoise& q);

struct Innovation {
  Eigen::Vector2d residual;
  Eigen::Matrix2d covariance;
  double mahalanobis2 = 0.0;
};

/// Throws std::runtime_error when the innovation covariance is singular.
Innovation innovation(const KalmanTrack& track, const Eigen::Vector2d& z, const MeasurementNoise& R);

/// Position-only update (Joseph form, symmetrized).
KalmanTrack kalman_update(const KalmanTrack& track, const Eigen::Vector2d& z,
                          const MeasurementNoise& R);

/// Density of a 2-D Gaussian innovation.
double innovation_likelihood(const Innovation& inn);

}  // namespace robotid::baselines
