// SPDX-License-Identifier: Apache-2.0
#include "robotid/eval/experiments.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

#include "robotid/net/network.hpp"

namespace robotid::eval {

namespace {

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

// Slots truly belonging to a or b, scored.
SuccessCounts pair_counts(const core::FrameRecord& frame, const core::AssignmentLabel& pred, int a, int b) {
  SuccessCounts c;
  for (std::size_t k = 0; k < frame.label.classes.size(); ++k) {
    const int truth = frame.label.classes[k];
    if (truth != a && truth != b) continue;
    ++c.total;
    if (pred.classes[k] == truth) ++c.correct;
  }
  return c;
}

}  // namespace

void SwapConfig::validate() const {
  if (trials < 0 || window < 0 || max_recovery < 0 || warmup < 0 || confirm_frames < 1) {
    throw std::invalid_argument("SwapConfig: negative or zero field");
  }
}

double SwapReport::recovered_fraction() const {
  if (trials.empty()) return 0.0;
  const auto n = std::count_if(trials.begin(), trials.end(), [](const SwapTrial& t) { return t.recovered; });
  return static_cast<double>(n) / static_cast<double>(trials.size());
}

SwapReport heading_swap_test(const std::vector<core::SequenceRecord>& sequences,
                             const std::shared_ptr<const net::NetworkParams>& params,
                             const SwapConfig& config) {
  config.validate();
  if (!params) throw std::invalid_argument("heading_swap_test: missing network parameters");
  const std::int64_t span = config.warmup + config.window + config.max_recovery;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    const auto& s = sequences[i];
    if (s.meta.n_robots < 2) throw std::invalid_argument("heading_swap_test: needs at least two robots");
    if (static_cast<std::int64_t>(s.frames.size()) >= span + 1) usable.push_back(i);
  }
  if (usable.empty() && config.trials > 0) {
    throw std::invalid_argument("heading_swap_test: no sequence is long enough");
  }

  std::mt19937_64 rng(config.seed);
  SwapReport report;
  for (int trial = 0; trial < config.trials; ++trial) {
    SwapTrial t;
    t.sequence = usable[uniform_index(rng, usable.size())];
    const auto& seq = sequences[t.sequence];
    const auto n = static_cast<std::uint64_t>(seq.meta.n_robots);
    t.robot_a = static_cast<int>(uniform_index(rng, n)) + 1;
    t.robot_b = static_cast<int>(uniform_index(rng, n - 1)) + 1;
    if (t.robot_b >= t.robot_a) ++t.robot_b;
    const auto length = static_cast<std::int64_t>(seq.frames.size());
    const std::uint64_t slack = static_cast<std::uint64_t>(length - span);
    t.start = config.warmup + static_cast<std::int64_t>(uniform_index(rng, slack));
    if (config.window == 0) {
      t.recovered = true;
      t.recovery_frames = 0;
      report.trials.push_back(t);
      continue;
    }

    net::InferenceSession session(params);
    const std::int64_t restore = t.start + config.window;
    const std::int64_t end = restore + config.max_recovery;
    int run = 0;
    std::int64_t run_start = -1;
    for (std::int64_t f = 0; f < end; ++f) {
      const auto& frame = seq.frames[static_cast<std::size_t>(f)];
      core::FrameInput input = frame.input;
      if (f >= t.start && f < restore) {
        std::swap(input.broadcasts[static_cast<std::size_t>(t.robot_a - 1)],
                  input.broadcasts[static_cast<std::size_t>(t.robot_b - 1)]);
      }
      const net::FramePrediction p = session.step(input);
      const SuccessCounts c = pair_counts(frame, p.label, t.robot_a, t.robot_b);
      if (f >= t.start - config.warmup && f < t.start) t.pair_before += c;
      if (f >= t.start && f < restore) t.pair_during += c;
      if (f < restore || c.total == 0) continue;
      if (c.correct == c.total) {
        if (run == 0) run_start = f;
        if (++run >= config.confirm_frames) {
          t.recovered = true;
          t.recovery_frames = run_start - restore;
          break;
        }
      } else {
        run = 0;
      }
    }
    report.trials.push_back(t);
  }
  return report;
}

ShuffleReport shuffle_control_test(const std::vector<core::SequenceRecord>& sequences,
                                   const std::shared_ptr<const net::NetworkParams>& params,
                                   std::uint64_t seed) {
  if (!params) throw std::invalid_argument("shuffle_control_test: missing network parameters");
  std::mt19937_64 rng(seed);
  ShuffleReport report;
  for (const auto& seq : sequences) {
    std::vector<core::FrameInput> inputs;
    inputs.reserve(seq.frames.size());
    for (const auto& f : seq.frames) inputs.push_back(f.input);
    const auto ordered = net::predict(inputs, params);
    std::vector<core::AssignmentLabel> labels;
    labels.reserve(ordered.size());
    for (const auto& p : ordered) labels.push_back(p.label);
    report.ordered += count_success(labels, seq.frames);

    std::vector<std::size_t> order(seq.frames.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<core::FrameRecord> permuted;
    permuted.reserve(order.size());
    std::vector<core::FrameInput> permuted_inputs;
    permuted_inputs.reserve(order.size());
    for (std::size_t i : order) {
      permuted.push_back(seq.frames[i]);
      permuted_inputs.push_back(seq.frames[i].input);
    }
    const auto shuffled = net::predict(permuted_inputs, params);
    labels.clear();
    for (const auto& p : shuffled) labels.push_back(p.label);
    report.shuffled += count_success(labels, permuted);
  }
  return report;
}

}  // namespace robotid::eval
