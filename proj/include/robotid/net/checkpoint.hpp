// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>

#include "robotid/net/params.hpp"

namespace robotid::net {

inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary layout (native little-endian):
//   char[8]  magic "RIDCKPT\0"
//   u32      version
//   i32 x 4  n_robots, n_slots, hidden, layers
//   u64      parameter count, u64 normalization length Q
//   f64[]    parameters in ParamBuffer order
//   f64[Q]   mean, f64[Q] stddev
//   u64      FNV-1a hash of everything above

void save_checkpoint(const NetworkParams& params, const std::filesystem::path& path);

/// Throws CheckpointError on a malformed file, or when `expected` is given
/// and (N, M) differ from the stored architecture.
NetworkParams load_checkpoint(const std::filesystem::path& path,
                              std::optional<std::pair<int, int>> expected = std::nullopt);

}  // namespace robotid::net
