// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include "robotid/eval/benchmark.hpp"
#include "robotid/eval/metrics.hpp"
#include "robotid/sim/simulator.hpp"

using namespace robotid;
using namespace robotid::eval;

namespace {

// Ten frames, one detection each, with 7 predictions right.
std::pair<std::vector<core::AssignmentLabel>, std::vector<core::FrameRecord>> seven_of_ten() {
  std::vector<core::AssignmentLabel> preds;
  std::vector<core::FrameRecord> frames;
  for (int i = 0; i < 10; ++i) {
    core::FrameRecord f;
    f.input.t = i;
    f.input.slots = {core::Detection{0.5, 0.5, 0.0, 0.8}, core::Detection{}};
    f.input.broadcasts = {0.0, 0.0};
    f.label.classes = {1 + i % 2, 0};
    f.truth = {core::RobotPose{0.5, 0.5, 0.0, true}, core::RobotPose{0.5, 0.5, 0.0, true}};
    frames.push_back(f);
    core::AssignmentLabel p = f.label;
    if (i < 3) p.classes[0] = 0;
    p.classes[1] = 2;  // empty slot: never counted
    preds.push_back(p);
  }
  return {preds, frames};
}

std::vector<core::SequenceRecord> small_benchmark(int count = 2, int length = 200) {
  sim::SimConfig c;
  std::vector<core::SequenceRecord> out;
  for (int i = 0; i < count; ++i) {
    sim::Rng rng(sim::derive_seed(61, static_cast<std::uint64_t>(i)));
    out.push_back(sim::generate_sequence(c, length, rng));
  }
  return out;
}

}  // namespace

TEST(SuccessRate, HandCountedFixture) {
  const auto [preds, frames] = seven_of_ten();
  const auto counts = count_success(preds, frames);
  EXPECT_EQ(counts.correct, 7);
  EXPECT_EQ(counts.total, 10);
  EXPECT_DOUBLE_EQ(success_rate(preds, frames), 0.7);
}

TEST(SuccessRate, PerfectAndAllClutterPredictions) {
  const auto seqs = small_benchmark(1);
  std::vector<core::AssignmentLabel> truth, zeros;
  for (const auto& f : seqs[0].frames) {
    truth.push_back(f.label);
    zeros.push_back(core::AssignmentLabel{std::vector<int>(f.label.classes.size(), 0)});
  }
  EXPECT_DOUBLE_EQ(success_rate(truth, seqs[0].frames), 1.0);

  sim::SimConfig clean;
  clean.p_fp = 0.0;
  clean.occlusion_rate = 0.0;
  sim::Rng rng(62);
  const auto s = sim::generate_sequence(clean, 100, rng);
  std::vector<core::AssignmentLabel> z;
  for (const auto& f : s.frames) z.push_back(core::AssignmentLabel{std::vector<int>(3, 0)});
  EXPECT_DOUBLE_EQ(success_rate(z, s.frames), 0.0);
}

TEST(SuccessRate, RejectsMisalignedInput) {
  const auto [preds, frames] = seven_of_ten();
  auto fewer = preds;
  fewer.pop_back();
  EXPECT_THROW(count_success(fewer, frames), std::invalid_argument);
  auto wider = preds;
  wider[0].classes.push_back(0);
  EXPECT_THROW(count_success(wider, frames), std::invalid_argument);
  EXPECT_DOUBLE_EQ(SuccessCounts{}.rate(), 0.0);
}

TEST(Localization, ConstantOffsetOnOneRobot) {
  const auto [preds, frames] = seven_of_ten();
  const double w = 9.0, h = 6.0;
  std::vector<std::vector<Position>> est;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    est.push_back({Position{0.5 + 0.3 / w, 0.5}, Position{0.5, 0.5}});
  }
  EXPECT_NEAR(avg_localization_error(est, frames, w, h), 0.15, 1e-12);
  std::vector<std::vector<Position>> exact(frames.size(), {Position{0.5, 0.5}, Position{0.5, 0.5}});
  EXPECT_DOUBLE_EQ(avg_localization_error(exact, frames, w, h), 0.0);
}

TEST(Localization, AbsentRobotsAreSkipped) {
  auto [preds, frames] = seven_of_ten();
  for (auto& f : frames) f.truth[1].present = false;
  std::vector<std::vector<Position>> est(frames.size(), {Position{0.5, 0.5}, Position{0.0, 0.0}});
  const auto sum = localization_error(est, frames, 9.0, 6.0);
  EXPECT_EQ(sum.count, 10);
  EXPECT_DOUBLE_EQ(sum.mean(), 0.0);
  est.pop_back();
  EXPECT_THROW(localization_error(est, frames, 9.0, 6.0), std::invalid_argument);
}

TEST(Methods, NamesRoundTrip) {
  for (Method m : {Method::kalman_ha, Method::kalman_ha2, Method::jpda, Method::net}) {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  EXPECT_EQ(parse_methods("kalman-ha,net"), (std::vector<Method>{Method::kalman_ha, Method::net}));
  EXPECT_TRUE(parse_methods("").empty());
  EXPECT_THROW(parse_method("kalman"), std::invalid_argument);
}

TEST(Benchmark, EmptyMethodListGivesEmptyReport) {
  const auto seqs = small_benchmark(1, 50);
  const auto r = run_benchmark(seqs, {"a"}, {}, baselines::BaselineConfig{}, nullptr);
  EXPECT_TRUE(r.methods.empty());
  EXPECT_TRUE(to_json(r).at("methods").empty());
}

TEST(Benchmark, NetWithoutCheckpointIsAnError) {
  const auto seqs = small_benchmark(1, 50);
  EXPECT_THROW(run_benchmark(seqs, {"a"}, {Method::net}, baselines::BaselineConfig{}, nullptr),
               std::invalid_argument);
  EXPECT_THROW(run_benchmark(seqs, {"a", "b"}, {Method::kalman_ha}, baselines::BaselineConfig{}, nullptr),
               std::invalid_argument);
}

TEST(Benchmark, NetShapeMustMatchSequences) {
  const auto seqs = small_benchmark(1, 50);
  net::Architecture a{3, 5, 4, 1};
  auto params = std::make_shared<const net::NetworkParams>(net::NetworkParams::initialize(a, 1));
  EXPECT_THROW(run_benchmark(seqs, {"a"}, {Method::net}, baselines::BaselineConfig{}, params),
               std::invalid_argument);
}

TEST(Benchmark, AggregatesSequencesAndIsDeterministic) {
  const auto seqs = small_benchmark();
  net::Architecture a{2, 3, 6, 2};
  auto params = std::make_shared<const net::NetworkParams>(net::NetworkParams::initialize(a, 2));
  const std::vector<Method> all{Method::kalman_ha, Method::kalman_ha2, Method::jpda, Method::net};
  const auto r1 = run_benchmark(seqs, {"s0", "s1"}, all, baselines::BaselineConfig{}, params);
  const auto r2 = run_benchmark(seqs, {"s0", "s1"}, all, baselines::BaselineConfig{}, params);
  EXPECT_EQ(to_json(r1).dump(), to_json(r2).dump());
  ASSERT_EQ(r1.methods.size(), 4u);
  for (const auto& m : r1.methods) {
    ASSERT_EQ(m.sequences.size(), 2u);
    SuccessCounts s = m.sequences[0].success;
    s += m.sequences[1].success;
    EXPECT_EQ(s, m.success);
    EXPECT_GE(m.success.rate(), 0.0);
    EXPECT_LE(m.success.rate(), 1.0);
    EXPECT_GE(m.localization.mean(), 0.0);
    // Every method sees every detection.
    EXPECT_EQ(m.success.total, r1.methods[0].success.total);
  }
  std::stringstream a1, a2;
  write_report_table(r1, a1);
  write_report_table(r2, a2);
  EXPECT_EQ(a1.str(), a2.str());
  EXPECT_NE(a1.str().find("kalman-ha2,all,"), std::string::npos);
}

TEST(Benchmark, RunMethodPositionsDefaultToFieldCentre) {
  const auto seqs = small_benchmark(1, 30);
  const auto run = run_method(Method::kalman_ha, seqs[0], baselines::BaselineConfig{}, nullptr);
  ASSERT_EQ(run.labels.size(), 30u);
  ASSERT_EQ(run.positions.size(), 30u);
  for (const auto& per_frame : run.positions) ASSERT_EQ(per_frame.size(), 2u);
  core::SequenceRecord blank = seqs[0];
  for (auto& f : blank.frames) {
    for (auto& d : f.input.slots) d = core::Detection{};
    for (auto& c : f.label.classes) c = 0;
  }
  const auto none = run_method(Method::jpda, blank, baselines::BaselineConfig{}, nullptr);
  EXPECT_EQ(none.positions[5][0], kFieldCentre);
}

TEST(Thresholds, ReportViolations) {
  EvalReport r;
  MethodScore ha;
  ha.method = Method::kalman_ha;
  ha.success = {80, 100};
  ha.localization = {50.0, 100};
  MethodScore ha2 = ha;
  ha2.method = Method::kalman_ha2;
  ha2.localization = {40.0, 100};
  MethodScore jp = ha;
  jp.method = Method::jpda;
  jp.localization = {30.0, 100};
  MethodScore n = ha;
  n.method = Method::net;
  n.success = {90, 100};
  n.localization = {20.0, 100};
  r.methods = {ha, ha2, jp, n};
  EvalThresholds t;
  t.min_net_success = 0.85;
  t.min_net_margin_over_ha = 0.05;
  t.require_localization_order = true;
  EXPECT_TRUE(check_thresholds(r, t).empty());
  t.min_net_success = 0.95;
  EXPECT_EQ(check_thresholds(r, t).size(), 1u);
  r.methods[3].localization = {45.0, 100};
  EXPECT_EQ(check_thresholds(r, t).size(), 3u);
}
