// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robotid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;    // validation or runtime failure
inline constexpr int kExitUsage = 2;      // unknown command or flag
inline constexpr int kExitThreshold = 3;  // a configured limit was violated

/// Entry point of the robotid tool. `args` excludes the program name.
/// Artifacts go to --out (or $ROBOTID_OUT); progress goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robotid::cli
