// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "robotid/tracker/filtered_track.hpp"

using namespace robotid;
using tracker::FilteredTrack;
using tracker::low_pass;
using tracker::LowPassTracker;

namespace {

FilteredTrack at(double x, double y) {
  FilteredTrack t;
  t.x = x;
  t.y = y;
  t.initialized = true;
  t.last_update = 0;
  return t;
}

core::FrameInput frame(std::vector<core::Detection> slots, std::int64_t t = 0) {
  core::FrameInput f;
  f.t = t;
  f.slots = std::move(slots);
  f.broadcasts = {0.0, 0.0};
  return f;
}

}  // namespace

TEST(LowPass, AlphaOneSnapsToMeasurement) {
  const auto t = low_pass(at(0.1, 0.9), 0.4, 0.6, 1.0, 3);
  EXPECT_EQ(t.x, 0.4);
  EXPECT_EQ(t.y, 0.6);
  EXPECT_EQ(t.last_update, 3);
}

TEST(LowPass, AlphaZeroKeepsEstimate) {
  const auto t = low_pass(at(0.1, 0.9), 0.4, 0.6, 0.0, 3);
  EXPECT_EQ(t.x, 0.1);
  EXPECT_EQ(t.y, 0.9);
}

TEST(LowPass, HalfwayExample) {
  const auto t = low_pass(at(0.0, 0.0), 1.0, 1.0, 0.5, 1);
  EXPECT_DOUBLE_EQ(t.x, 0.5);
  EXPECT_DOUBLE_EQ(t.y, 0.5);
  EXPECT_DOUBLE_EQ(t.alpha, 0.5);
}

TEST(LowPass, FirstObservationSnaps) {
  const auto t = low_pass(FilteredTrack{}, 0.3, 0.7, 0.1, 0);
  EXPECT_TRUE(t.initialized);
  EXPECT_EQ(t.x, 0.3);
  EXPECT_EQ(t.y, 0.7);
}

TEST(LowPass, RejectsAlphaOutsideUnitInterval) {
  EXPECT_THROW(low_pass(at(0, 0), 1, 1, 1.5, 0), std::invalid_argument);
  EXPECT_THROW(low_pass(at(0, 0), 1, 1, -0.1, 0), std::invalid_argument);
  EXPECT_THROW(low_pass(at(0, 0), 1, 1, std::nan(""), 0), std::invalid_argument);
}

TEST(LowPass, ConvergesGeometrically) {
  FilteredTrack t = at(0.0, 1.0);
  const double alpha = 0.2;
  for (int k = 1; k <= 50; ++k) {
    t = low_pass(t, 0.5, 0.5, alpha, k);
    const double expected_gap = 0.5 * std::pow(1.0 - alpha, k);
    EXPECT_NEAR(0.5 - t.x, expected_gap, 1e-12);
    EXPECT_NEAR(t.y - 0.5, expected_gap, 1e-12);
  }
}

TEST(LowPass, StaysInsideUnitSquare) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FilteredTrack t;
  for (int k = 0; k < 10000; ++k) {
    t = low_pass(t, u(rng), u(rng), u(rng), k);
    ASSERT_GE(t.x, 0.0);
    ASSERT_LE(t.x, 1.0);
    ASSERT_GE(t.y, 0.0);
    ASSERT_LE(t.y, 1.0);
  }
}

TEST(LowPassTracker, UpdatesAssignedRobotsAndHoldsOthers) {
  LowPassTracker tr(2);
  const auto f0 = frame({core::Detection{0.2, 0.2, 0.0, 0.9}, core::Detection{0.8, 0.6, 0.0, 0.9}}, 0);
  tr.update(f0, {1, 0}, {0.9, 0.4});
  EXPECT_EQ(tr.tracks()[0].x, 0.8);
  EXPECT_EQ(tr.tracks()[1].x, 0.2);

  const auto f1 = frame({core::Detection{0.4, 0.4, 0.0, 0.9}, core::Detection{}}, 1);
  tr.update(f1, {-1, 0}, {0.0, 0.5});
  EXPECT_EQ(tr.tracks()[0].x, 0.8);
  EXPECT_EQ(tr.tracks()[0].last_update, 0);
  EXPECT_DOUBLE_EQ(tr.tracks()[1].x, 0.3);
  EXPECT_EQ(tr.tracks()[1].last_update, 1);

  tr.reset();
  EXPECT_FALSE(tr.tracks()[0].initialized);
}

TEST(LowPassTracker, RejectsInconsistentInput) {
  LowPassTracker tr(2);
  const auto f = frame({core::Detection{0.2, 0.2, 0.0, 0.9}, core::Detection{}});
  EXPECT_THROW(tr.update(f, {0}, {0.5}), std::invalid_argument);
  EXPECT_THROW(tr.update(f, {0, 5}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(tr.update(f, {0, 1}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(tr.update(f, {0, -1}, {2.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(LowPassTracker(0), std::invalid_argument);
}
