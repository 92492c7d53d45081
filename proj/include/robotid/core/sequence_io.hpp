// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "robotid/core/types.hpp"

namespace robotid::core {

inline constexpr int kSequenceFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-oriented text format. A header of "key value" lines is followed by
// one "f" line per frame:
//
//   robotid-sequence 1
//   n_robots 2
//   ...
//   frames 1000
//   f <t> b <N headings> d <M x (x y phi gamma)> l <M classes> g <N x (x y phi present)>
//
// Doubles use the shortest representation that round-trips exactly.

void write_sequence(const SequenceRecord& record, std::ostream& out);
void write_sequence(const SequenceRecord& record, const std::filesystem::path& path);

SequenceRecord read_sequence(std::istream& in);
SequenceRecord read_sequence(const std::filesystem::path& path);

/// A manifest lists one sequence path per line, relative to the manifest's
/// own directory unless absolute.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<std::filesystem::path>& entries,
                    const std::filesystem::path& path);

std::string format_double(double value);

}  // namespace robotid::core
