// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "robotid/core/types.hpp"

namespace robotid::cli {

/// Raised for requests the session rejects; `status` is the HTTP code.
class SessionError : public std::runtime_error {
 public:
  SessionError(int status, const std::string& what) : std::runtime_error(what), status(status) {}
  int status;
};

/// One human labelling session over a fixed list of sequences, walked frame
/// by frame. Ground truth never leaves this class except as scores.
class Session {
 public:
  using Clock = std::chrono::steady_clock;

  Session(std::vector<core::SequenceRecord> sequences, std::vector<std::string> names);

  /// Current frame: broadcasts, non-empty detections, choices so far and a
  /// frame token. {"done": true} once every frame has been advanced past.
  [[nodiscard]] nlohmann::json next_frame();

  /// Records class `cls` for `slot` of the current frame. When `token` is
  /// given it must equal the current frame token.
  void choose(int slot, int cls, std::optional<std::int64_t> token = std::nullopt);

  /// Commits the current frame and moves on. A stale token is rejected, so a
  /// repeated submit cannot skip a frame.
  nlohmann::json advance(std::optional<std::int64_t> token = std::nullopt);

  /// Recorded choices and success rates over the frames committed so far.
  [[nodiscard]] nlohmann::json report() const;

  [[nodiscard]] bool done() const { return cursor_ >= total_frames_; }
  [[nodiscard]] std::int64_t token() const { return cursor_; }

 private:
  struct Position {
    std::size_t sequence;
    std::size_t frame;
  };
  [[nodiscard]] Position position() const;

  std::vector<core::SequenceRecord> sequences_;
  std::vector<std::string> names_;
  std::vector<std::vector<core::AssignmentLabel>> choices_;
  std::vector<std::vector<double>> latency_ms_;
  std::int64_t cursor_ = 0;
  std::int64_t total_frames_ = 0;
  std::optional<Clock::time_point> shown_at_;
};

/// Picks `count` distinct indices out of `available` with a seeded shuffle.
std::vector<std::size_t> pick_sequences(std::size_t available, int count, std::uint64_t seed);

}  // namespace robotid::cli
