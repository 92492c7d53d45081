// SPDX-License-Identifier: Apache-2.0
#include "robotid/cli/session.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "robotid/eval/metrics.hpp"

namespace robotid::cli {

Session::Session(std::vector<core::SequenceRecord> sequences, std::vector<std::string> names)
    : sequences_(std::move(sequences)), names_(std::move(names)) {
  if (names_.size() != sequences_.size()) throw std::invalid_argument("Session: one name per sequence");
  for (const auto& s : sequences_) {
    core::validate_sequence(s);
    std::vector<core::AssignmentLabel> blank(s.frames.size());
    for (std::size_t f = 0; f < s.frames.size(); ++f) {
      blank[f].classes.assign(s.frames[f].input.slots.size(), 0);
    }
    choices_.push_back(std::move(blank));
    latency_ms_.emplace_back(s.frames.size(), 0.0);
    total_frames_ += static_cast<std::int64_t>(s.frames.size());
  }
}

Session::Position Session::position() const {
  auto rest = static_cast<std::size_t>(cursor_);
  for (std::size_t s = 0; s < sequences_.size(); ++s) {
    if (rest < sequences_[s].frames.size()) return {s, rest};
    rest -= sequences_[s].frames.size();
  }
  throw SessionError(409, "session finished");
}

nlohmann::json Session::next_frame() {
  if (done()) return {{"done", true}, {"token", cursor_}};
  const Position p = position();
  const auto& seq = sequences_[p.sequence];
  const auto& input = seq.frames[p.frame].input;
  if (!shown_at_) shown_at_ = Clock::now();
  nlohmann::json det = nlohmann::json::array();
  for (std::size_t k = 0; k < input.slots.size(); ++k) {
    const auto& d = input.slots[k];
    if (d.empty()) continue;
    det.push_back({{"slot", k}, {"x", d.x}, {"y", d.y}, {"phi", d.phi}, {"gamma", d.gamma}});
  }
  return {{"done", false},
          {"token", cursor_},
          {"sequence", p.sequence},
          {"sequences", sequences_.size()},
          {"frame", p.frame},
          {"frames", seq.frames.size()},
          {"t", input.t},
          {"n_robots", seq.meta.n_robots},
          {"n_slots", seq.meta.n_slots},
          {"broadcasts", input.broadcasts},
          {"detections", std::move(det)},
          {"choices", choices_[p.sequence][p.frame].classes}};
}

void Session::choose(int slot, int cls, std::optional<std::int64_t> token) {
  if (done()) throw SessionError(409, "session finished");
  if (token && *token != cursor_) throw SessionError(409, "stale frame token");
  const Position p = position();
  const auto& seq = sequences_[p.sequence];
  const auto& slots = seq.frames[p.frame].input.slots;
  if (slot < 0 || static_cast<std::size_t>(slot) >= slots.size()) throw SessionError(400, "slot out of range");
  if (slots[static_cast<std::size_t>(slot)].empty()) throw SessionError(400, "slot is empty");
  if (cls < 0 || cls > seq.meta.n_robots) throw SessionError(400, "class out of range");
  choices_[p.sequence][p.frame].classes[static_cast<std::size_t>(slot)] = cls;
}

nlohmann::json Session::advance(std::optional<std::int64_t> token) {
  if (done()) throw SessionError(409, "session finished");
  if (token && *token != cursor_) throw SessionError(409, "stale frame token");
  const Position p = position();
  if (shown_at_) {
    latency_ms_[p.sequence][p.frame] =
        std::chrono::duration<double, std::milli>(Clock::now() - *shown_at_).count();
  }
  shown_at_.reset();
  ++cursor_;
  return {{"token", cursor_}, {"done", done()}};
}

nlohmann::json Session::report() const {
  nlohmann::json seqs = nlohmann::json::array();
  eval::SuccessCounts overall;
  auto committed = static_cast<std::size_t>(cursor_);
  for (std::size_t s = 0; s < sequences_.size(); ++s) {
    const auto& frames = sequences_[s].frames;
    const std::size_t n = std::min(committed, frames.size());
    committed -= n;
    const std::vector<core::FrameRecord> scored(frames.begin(), frames.begin() + static_cast<std::ptrdiff_t>(n));
    const std::vector<core::AssignmentLabel> chosen(choices_[s].begin(),
                                                    choices_[s].begin() + static_cast<std::ptrdiff_t>(n));
    const eval::SuccessCounts c = eval::count_success(chosen, scored);
    overall += c;
    nlohmann::json choices = nlohmann::json::array();
    for (std::size_t f = 0; f < n; ++f) choices.push_back(chosen[f].classes);
    seqs.push_back({{"name", names_[s]},
                    {"frames_committed", n},
                    {"frames", frames.size()},
                    {"success_rate", c.rate()},
                    {"correct", c.correct},
                    {"detections", c.total},
                    {"choices", std::move(choices)},
                    {"latency_ms", std::vector<double>(latency_ms_[s].begin(),
                                                       latency_ms_[s].begin() + static_cast<std::ptrdiff_t>(n))}});
  }
  return {{"complete", done()},
          {"success_rate", overall.rate()},
          {"correct", overall.correct},
          {"detections", overall.total},
          {"sequences", std::move(seqs)}};
}

std::vector<std::size_t> pick_sequences(std::size_t available, int count, std::uint64_t seed) {
  if (count < 0 || static_cast<std::size_t>(count) > available) {
    throw std::invalid_argument("pick_sequences: not enough sequences");
  }
  std::vector<std::size_t> idx(available);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(count));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace robotid::cli
