// SPDX-License-Identifier: Apache-2.0
#include "robotid/baselines/kalman.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace robotid::baselines {

namespace {

Eigen::Matrix<double, 2, 6> measurement_matrix() {
  Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  return h;
}

}  // namespace

Eigen::Matrix<double, 6, 6> transition_matrix(double dt) {
  Eigen::Matrix<double, 6, 6> f = Eigen::Matrix<double, 6, 6>::Identity();
  for (int axis = 0; axis < 2; ++axis) {
    f(axis, axis + 2) = dt;
    f(axis, axis + 4) = 0.5 * dt * dt;
    f(axis + 2, axis + 4) = dt;
  }
  return f;
}

Eigen::Matrix<double, 6, 6> process_noise(double dt, const ProcessNoise& q) {
  Eigen::Matrix3d block;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  block << dt3 * dt2 / 20.0, dt2 * dt2 / 8.0, dt3 / 6.0,
           dt2 * dt2 / 8.0, dt3 / 3.0, dt2 / 2.0,
           dt3 / 6.0, dt2 / 2.0, dt;
  Eigen::Matrix<double, 6, 6> out = Eigen::Matrix<double, 6, 6>::Zero();
  const double qa[2] = {q.qx, q.qy};
  for (int axis = 0; axis < 2; ++axis) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) out(axis + 2 * r, axis + 2 * c) = qa[axis] * block(r, c);
    }
  }
  return out;
}

KalmanTrack kalman_init(const Eigen::Vector2d& z, const MeasurementNoise& R, double velocity_var,
                        double accel_var) {
  KalmanTrack t;
  t.x.setZero();
  t.x.head<2>() = z;
  t.P.setZero();
  t.P.topLeftCorner<2, 2>() = R;
  t.P(2, 2) = velocity_var;
  t.P(3, 3) = velocity_var;
  t.P(4, 4) = accel_var;
  t.P(5, 5) = accel_var;
  return t;
}

KalmanTrack kalman_predict(const KalmanTrack& track, double dt, const ProcessNoise& q) {
  if (!(dt > 0.0)) throw std::invalid_argument("kalman_predict: dt must be positive");
  const auto f = transition_matrix(dt);
  KalmanTrack out = track;
  out.x = f * track.x;
  out.P = f * track.P * f.transpose() + process_noise(dt, q);
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  ++out.age;
  return out;
}

Innovation innovation(const KalmanTrack& track, const Eigen::Vector2d& z, const MeasurementNoise& R) {
  Innovation inn;
  inn.residual = z - track.x.head<2>();
  inn.covariance = track.P.topLeftCorner<2, 2>() + R;
  const double det = inn.covariance.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw std::runtime_error("kalman: singular innovation covariance");
  }
  inn.mahalanobis2 = inn.residual.dot(inn.covariance.inverse() * inn.residual);
  return inn;
}

KalmanTrack kalman_update(const KalmanTrack& track, const Eigen::Vector2d& z,
                          const MeasurementNoise& R) {
  const Innovation inn = innovation(track, z, R);
  const auto h = measurement_matrix();
  const Eigen::Matrix<double, 6, 2> gain = track.P * h.transpose() * inn.covariance.inverse();
  KalmanTrack out = track;
  out.x = track.x + gain * inn.residual;
  const Eigen::Matrix<double, 6, 6> ikh = Eigen::Matrix<double, 6, 6>::Identity() - gain * h;
  out.P = ikh * track.P * ikh.transpose() + gain * R * gain.transpose();
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  return out;
}

double innovation_likelihood(const Innovation& inn) {
  return std::exp(-0.5 * inn.mahalanobis2) /
         (2.0 * std::numbers::pi * std::sqrt(inn.covariance.determinant()));
}

}  // namespace robotid::baselines
