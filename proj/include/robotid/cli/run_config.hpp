// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "robotid/baselines/config.hpp"
#include "robotid/eval/benchmark.hpp"
#include "robotid/eval/experiments.hpp"
#include "robotid/net/trainer.hpp"
#include "robotid/sim/simulator.hpp"

namespace robotid::cli {

/// Everything a workflow can be configured with. Each field is bound to a
/// flag whose long name is also its config-file key.
struct RunConfig {
  sim::SimConfig sim;
  int sequences = 10;
  std::int64_t frames = 1000;

  net::TrainConfig train;
  std::string fine_tune;

  baselines::BaselineConfig baseline;
  std::string methods = "kalman-ha,kalman-ha2,jpda,net";
  eval::EvalThresholds thresholds;

  eval::SwapConfig swap;
  std::optional<double> min_recovered;
  std::uint64_t shuffle_seed = 1;
  std::optional<double> min_shuffle_gap;

  std::string manifest;
  std::string input;
  std::string checkpoint;
  std::string out = ".";

  std::string host = "127.0.0.1";
  int port = 8080;
  int session_sequences = 4;
  std::uint64_t session_seed = 1;
  std::string static_dir;
};

/// Option groups a subcommand can expose.
void add_output_options(CLI::App& app, RunConfig& config);
void add_sim_options(CLI::App& app, RunConfig& config);
void add_train_options(CLI::App& app, RunConfig& config);
void add_baseline_options(CLI::App& app, RunConfig& config);
void add_threshold_options(CLI::App& app, RunConfig& config);
void add_swap_options(CLI::App& app, RunConfig& config);
void add_shuffle_options(CLI::App& app, RunConfig& config);
void add_serve_options(CLI::App& app, RunConfig& config);

/// Throws std::invalid_argument describing the first invalid field among
/// those used by `command`.
void validate(const RunConfig& config, const std::string& command);

}  // namespace robotid::cli
