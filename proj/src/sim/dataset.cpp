// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <stdexcept>

#include "robotid/core/sequence_io.hpp"
#include "robotid/sim/simulator.hpp"

namespace robotid::sim {

std::filesystem::path generate_dataset(const SimConfig& config, int n_sequences,
                                       std::int64_t length,
                                       const std::filesystem::path& out_dir) {
  config.validate();
  if (n_sequences < 0) throw std::invalid_argument("generate_dataset: negative count");
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> entries;
  entries.reserve(static_cast<std::size_t>(n_sequences));
  for (int i = 0; i < n_sequences; ++i) {
    SimConfig seq_config = config;
    seq_config.seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    Rng rng(seq_config.seed);
    core::SequenceRecord rec = generate_sequence(seq_config, length, rng);
    char name[32];
    std::snprintf(name, sizeof(name), "seq_%04d.txt", i);
    try {
      core::write_sequence(rec, out_dir / name);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("generate_dataset: sequence ") + name + ": " +
                               e.what());
    }
    entries.emplace_back(name);
  }
  const auto manifest = out_dir / "manifest.txt";
  core::write_manifest(entries, manifest);
  return manifest;
}

}  // namespace robotid::sim
