// SPDX-License-Identifier: Apache-2.0
#include "robotid/cli/run_config.hpp"

#include <stdexcept>

namespace robotid::cli {

void add_output_options(CLI::App& app, RunConfig& c) {
  app.add_option("--out", c.out, "Output directory")->envname("ROBOTID_OUT")->capture_default_str();
}

void add_sim_options(CLI::App& app, RunConfig& c) {
  auto& s = c.sim;
  app.add_option("--n", s.n_robots, "Robots")->capture_default_str();
  app.add_option("--m", s.n_slots, "Detection slots")->capture_default_str();
  app.add_option("--frames", c.frames, "Frames per sequence")->capture_default_str();
  app.add_option("--sequences", c.sequences, "Number of sequences")->capture_default_str();
  app.add_option("--seed", s.seed, "Master seed")->capture_default_str();
  app.add_option("--field-width", s.field_width, "Field width (m)")->capture_default_str();
  app.add_option("--field-height", s.field_height, "Field height (m)")->capture_default_str();
  app.add_option("--frame-rate", s.frame_rate, "Frame rate (Hz)")->capture_default_str();
  app.add_option("--sigma-x", s.sigma_x, "Position noise along x (m)")->capture_default_str();
  app.add_option("--sigma-y", s.sigma_y, "Position noise along y (m)")->capture_default_str();
  app.add_option("--sigma-phi", s.sigma_phi, "Heading noise (rad)")->capture_default_str();
  app.add_option("--position-noise-correlation", s.position_noise_correlation,
                 "Per-frame AR(1) coefficient of the position noise")
      ->capture_default_str();
  app.add_option("--p-fn", s.p_fn, "False-negative probability")->capture_default_str();
  app.add_option("--p-fp", s.p_fp, "Expected false positives per frame")->capture_default_str();
  app.add_option("--occlusion-rate", s.occlusion_rate, "Occlusion events per robot per frame")
      ->capture_default_str();
  app.add_option("--occlusion-min", s.occlusion_min, "Shortest occlusion (frames)")->capture_default_str();
  app.add_option("--occlusion-max", s.occlusion_max, "Longest occlusion (frames)")->capture_default_str();
  app.add_option("--broadcast-dropout", s.broadcast_dropout, "Probability a broadcast is lost")
      ->capture_default_str();
  app.add_option("--v-max", s.v_max, "Speed limit (m/s)")->capture_default_str();
  app.add_option("--accel-sigma", s.accel_sigma, "Acceleration std (m/s^2)")->capture_default_str();
  app.add_option("--accel-tau", s.accel_tau, "Acceleration time constant (s)")->capture_default_str();
  app.add_option("--omega-max", s.omega_max, "Turn-rate limit (rad/s)")->capture_default_str();
  app.add_option("--angular-accel-sigma", s.angular_accel_sigma, "Angular acceleration std (rad/s^2)")
      ->capture_default_str();
  app.add_option("--angular-tau", s.angular_tau, "Angular time constant (s)")->capture_default_str();
  app.add_option("--gamma-true-a", s.gamma_true_a, "Beta a of true-detection confidence")->capture_default_str();
  app.add_option("--gamma-true-b", s.gamma_true_b, "Beta b of true-detection confidence")->capture_default_str();
  app.add_option("--gamma-clutter-a", s.gamma_clutter_a, "Beta a of clutter confidence")->capture_default_str();
  app.add_option("--gamma-clutter-b", s.gamma_clutter_b, "Beta b of clutter confidence")->capture_default_str();
}

void add_train_options(CLI::App& app, RunConfig& c) {
  auto& t = c.train;
  app.add_option("--fine-tune", c.fine_tune, "Checkpoint to continue from");
  app.add_option("--learning-rate", t.learning_rate, "Initial Adam step size")->capture_default_str();
  app.add_option("--lr-decay", t.lr_decay, "Step-size decay per update")->capture_default_str();
  app.add_option("--l2", t.l2, "Weight decay on weight matrices")->capture_default_str();
  app.add_option("--bptt", t.bptt_window, "Truncated BPTT window (frames)")->capture_default_str();
  app.add_option("--chunk", t.chunk_length, "Frames per training chunk")->capture_default_str();
  app.add_option("--epochs", t.max_epochs, "Passes over the training set")->capture_default_str();
  app.add_option("--clip", t.clip_norm, "Global gradient-norm clip")->capture_default_str();
  app.add_option("--batch-sequences", t.batch_sequences, "Sequences advanced together per update")
      ->capture_default_str();
  app.add_option("--hidden", t.hidden, "LSTM units per layer")->capture_default_str();
  app.add_option("--layers", t.layers, "Stacked LSTM layers")->capture_default_str();
  app.add_option("--seed", t.seed, "Initialization and shuffling seed")->capture_default_str();
}

void add_baseline_options(CLI::App& app, RunConfig& c) {
  auto& b = c.baseline;
  app.add_option("--methods", c.methods, "Comma-separated: kalman-ha,kalman-ha2,jpda,net")
      ->capture_default_str();
  app.add_option("--w-position", b.w_position, "Weight of the Mahalanobis term")->capture_default_str();
  app.add_option("--w-heading", b.w_heading, "Weight of the heading term")->capture_default_str();
  app.add_option("--jerk-density", b.jerk_density, "Process noise (m^2/s^5)")->capture_default_str();
  app.add_option("--init-velocity-sigma", b.init_velocity_sigma, "Initial velocity std (m/s)")
      ->capture_default_str();
  app.add_option("--init-accel-sigma", b.init_accel_sigma, "Initial acceleration std (m/s^2)")
      ->capture_default_str();
  app.add_option("--new-track-distance", b.new_track_distance, "Position cost without a track")
      ->capture_default_str();
  app.add_option("--gate-ha", b.gate_ha, "Kalman-HA gate (squared Mahalanobis)")->capture_default_str();
  app.add_option("--gate-ha2", b.gate_ha2, "Kalman-HA2 gate (squared Mahalanobis)")->capture_default_str();
  app.add_option("--confirm-hits", b.confirm_hits, "Hits to confirm a track")->capture_default_str();
  app.add_option("--max-misses", b.max_misses, "Misses a confirmed track survives")->capture_default_str();
  app.add_option("--heading-check-gain", b.heading_check_gain, "Gain of the heading-error mean")
      ->capture_default_str();
  app.add_option("--heading-check-limit", b.heading_check_limit, "Heading-error limit (rad), <= 0 off")
      ->capture_default_str();
  app.add_option("--gate-jpda", b.gate_jpda, "JPDA gate (squared Mahalanobis)")->capture_default_str();
  app.add_option("--max-position-sigma", b.max_position_sigma, "JPDA track drop threshold (m)")
      ->capture_default_str();
}

void add_threshold_options(CLI::App& app, RunConfig& c) {
  app.add_option("--min-net-success", c.thresholds.min_net_success, "Fail below this net success rate");
  app.add_option("--min-net-margin-over-ha", c.thresholds.min_net_margin_over_ha,
                 "Fail if net leads kalman-ha by less than this");
  app.add_flag("--require-localization-order", c.thresholds.require_localization_order,
               "Fail unless net <= jpda and net <= kalman-ha2 <= kalman-ha in localization error");
}

void add_swap_options(CLI::App& app, RunConfig& c) {
  auto& s = c.swap;
  app.add_option("--trials", s.trials, "Swap trials")->capture_default_str();
  app.add_option("--window", s.window, "Frames with exchanged broadcasts")->capture_default_str();
  app.add_option("--max-recovery", s.max_recovery, "Frames allowed to recover")->capture_default_str();
  app.add_option("--warmup", s.warmup, "Clean frames before a swap")->capture_default_str();
  app.add_option("--confirm-frames", s.confirm_frames, "Consecutive correct frames for recovery")
      ->capture_default_str();
  app.add_option("--seed", s.seed, "Trial placement seed")->capture_default_str();
  app.add_option("--min-recovered", c.min_recovered, "Fail below this recovered fraction");
}

void add_shuffle_options(CLI::App& app, RunConfig& c) {
  app.add_option("--seed", c.shuffle_seed, "Permutation seed")->capture_default_str();
  app.add_option("--min-gap", c.min_shuffle_gap, "Fail if ordered - shuffled success is below this");
}

void add_serve_options(CLI::App& app, RunConfig& c) {
  app.add_option("--host", c.host, "Bind address")->capture_default_str();
  app.add_option("--port", c.port, "Port; 0 picks a free one")->capture_default_str();
  app.add_option("--session-sequences", c.session_sequences, "Sequences per session")->capture_default_str();
  app.add_option("--seed", c.session_seed, "Sequence selection seed")->capture_default_str();
  app.add_option("--static-dir", c.static_dir, "Directory served at / for the browser UI");
}

void validate(const RunConfig& c, const std::string& command) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(!c.out.empty(), "--out must not be empty");
  if (command == "simulate") {
    c.sim.validate();
    require(c.sequences >= 0, "--sequences must be >= 0");
    require(c.frames >= 1, "--frames must be >= 1");
  } else if (command == "train") {
    require(!c.manifest.empty(), "--manifest is required");
    c.train.validate();
  } else if (command == "infer") {
    require(!c.checkpoint.empty(), "--checkpoint is required");
    require(!c.input.empty() || !c.manifest.empty(), "--input or --manifest is required");
  } else if (command == "eval") {
    require(!c.manifest.empty(), "--manifest is required");
    c.baseline.validate();
    const auto methods = eval::parse_methods(c.methods);
    for (auto m : methods) {
      require(m != eval::Method::net || !c.checkpoint.empty(), "the net method needs --checkpoint");
    }
  } else if (command == "swap-test") {
    require(!c.manifest.empty(), "--manifest is required");
    require(!c.checkpoint.empty(), "--checkpoint is required");
    c.swap.validate();
  } else if (command == "shuffle-test") {
    require(!c.manifest.empty(), "--manifest is required");
    require(!c.checkpoint.empty(), "--checkpoint is required");
  } else if (command == "serve") {
    require(!c.manifest.empty(), "--manifest is required");
    require(c.port >= 0 && c.port <= 65535, "--port must be in [0, 65535]");
    require(c.session_sequences >= 1, "--session-sequences must be >= 1");
  } else {
    throw std::invalid_argument("unknown command '" + command + "'");
  }
}

}  // namespace robotid::cli
