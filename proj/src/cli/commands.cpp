// SPDX-License-Identifier: Apache-2.0
#include "robotid/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "robotid/cli/run_config.hpp"
#ifndef ROBOTID_NO_SERVER
#include "robotid/cli/server.hpp"
#include "robotid/cli/session.hpp"
#endif
#include "robotid/core/sequence_io.hpp"
#include "robotid/net/checkpoint.hpp"
#include "robotid/net/network.hpp"
#include "robotid/tracker/filtered_track.hpp"

namespace robotid::cli {

namespace fs = std::filesystem;

namespace {

struct Dataset {
  std::vector<core::SequenceRecord> sequences;
  std::vector<std::string> names;
};

Dataset load_manifest(const std::string& manifest) {
  Dataset d;
  for (const auto& path : core::read_manifest(manifest)) {
    d.sequences.push_back(core::read_sequence(path));
    d.names.push_back(path.stem().string());
  }
  return d;
}

void require_uniform_shape(const Dataset& d) {
  for (const auto& s : d.sequences) {
    const auto& first = d.sequences.front().meta;
    if (s.meta.n_robots != first.n_robots || s.meta.n_slots != first.n_slots) {
      throw std::invalid_argument("all sequences must share the robot and slot counts");
    }
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::shared_ptr<const net::NetworkParams> load_net(const std::string& path) {
  return std::make_shared<const net::NetworkParams>(net::load_checkpoint(path));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto manifest = sim::generate_dataset(c.sim, c.sequences, c.frames, c.out);
  err << "wrote " << c.sequences << " sequences of " << c.frames << " frames\n";
  out << manifest.string() << '\n';
  return kExitOk;
}

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Dataset data = load_manifest(c.manifest);
  if (data.sequences.empty()) throw std::invalid_argument("training manifest is empty");
  require_uniform_shape(data);
  const auto& meta = data.sequences.front().meta;
  std::optional<net::NetworkParams> initial;
  if (!c.fine_tune.empty()) {
    initial = net::load_checkpoint(c.fine_tune, std::make_pair(meta.n_robots, meta.n_slots));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const net::TrainResult result =
      net::train(data.sequences, c.train, initial, [&](int epoch, const std::vector<net::TrainLogEntry>& log) {
        err << "epoch " << epoch + 1 << "/" << c.train.max_epochs << " loss "
            << (log.empty() ? 0.0 : log.back().chunk_loss) << " (" << seconds_since(t0) << " s)\n";
      });
  const fs::path ckpt = c.checkpoint.empty() ? fs::path(c.out) / "model.ckpt" : fs::path(c.checkpoint);
  net::save_checkpoint(result.params, ckpt);
  net::write_train_log(result.log, fs::path(c.out) / "train_log.csv");
  out << ckpt.string() << '\n';
  if (result.diverged) {
    err << "training diverged; saved the last finite parameters\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int cmd_infer(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto params = load_net(c.checkpoint);
  Dataset data;
  if (!c.input.empty()) {
    data.sequences.push_back(core::read_sequence(c.input));
    data.names.push_back(fs::path(c.input).stem().string());
  } else {
    data = load_manifest(c.manifest);
  }
  const fs::path path = fs::path(c.out) / "predictions.csv";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  const int n = params->arch().n_robots;
  const int m = params->arch().n_slots;
  f << "sequence,t";
  for (int k = 0; k < m; ++k) f << ",slot" << k;
  for (int r = 1; r <= n; ++r) f << ",robot" << r << "_x,robot" << r << "_y,robot" << r << "_alpha";
  f << '\n';
  eval::SuccessCounts total;
  for (std::size_t i = 0; i < data.sequences.size(); ++i) {
    const auto& seq = data.sequences[i];
    net::InferenceSession session(params);
    tracker::LowPassTracker filter(n);
    std::vector<core::AssignmentLabel> labels;
    for (const auto& frame : seq.frames) {
      const net::FramePrediction p = session.step(frame.input);
      filter.update(frame.input, p.robot_slot, p.robot_prob);
      f << data.names[i] << ',' << frame.input.t;
      for (int cls : p.label.classes) f << ',' << cls;
      for (const auto& t : filter.tracks()) {
        f << ',' << core::format_double(t.x) << ',' << core::format_double(t.y) << ','
          << core::format_double(t.alpha);
      }
      f << '\n';
      labels.push_back(p.label);
    }
    total += eval::count_success(labels, seq.frames);
  }
  err << "success rate against stored labels: " << total.rate() << '\n';
  out << path.string() << '\n';
  return kExitOk;
}

nlohmann::json baseline_json(const baselines::BaselineConfig& b) {
  return {{"w_position", b.w_position},
          {"w_heading", b.w_heading},
          {"jerk_density", b.jerk_density},
          {"init_velocity_sigma", b.init_velocity_sigma},
          {"init_accel_sigma", b.init_accel_sigma},
          {"new_track_distance", b.new_track_distance},
          {"gate_ha", b.gate_ha},
          {"gate_ha2", b.gate_ha2},
          {"confirm_hits", b.confirm_hits},
          {"max_misses", b.max_misses},
          {"heading_check_gain", b.heading_check_gain},
          {"heading_check_limit", b.heading_check_limit},
          {"gate_jpda", b.gate_jpda},
          {"max_position_sigma", b.max_position_sigma}};
}

int cmd_eval(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto methods = eval::parse_methods(c.methods);
  const Dataset data = load_manifest(c.manifest);
  std::shared_ptr<const net::NetworkParams> params;
  if (std::find(methods.begin(), methods.end(), eval::Method::net) != methods.end()) {
    params = load_net(c.checkpoint);
  }
  const auto t0 = std::chrono::steady_clock::now();
  eval::EvalReport report = eval::run_benchmark(data.sequences, data.names, methods, c.baseline, params);
  const double wall = seconds_since(t0);

  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& s : data.sequences) seeds.push_back(s.meta.seed);
  report.metadata = {{"manifest", c.manifest},
                     {"checkpoint", c.checkpoint},
                     {"methods", c.methods},
                     {"sequence_seeds", seeds},
                     {"baseline", baseline_json(c.baseline)}};
  write_text(fs::path(c.out) / "report.json", eval::to_json(report).dump(2) + "\n");
  {
    std::ofstream f(fs::path(c.out) / "report.csv", std::ios::binary);
    eval::write_report_table(report, f);
  }
  write_text(fs::path(c.out) / "timing.json", nlohmann::json{{"wall_seconds", wall}}.dump(2) + "\n");

  for (const auto& m : report.methods) {
    out << eval::method_name(m.method) << ": success " << m.success.rate() << " (" << m.success.correct << "/"
        << m.success.total << "), localization " << m.localization.mean() << " m\n";
  }
  const auto violations = eval::check_thresholds(report, c.thresholds);
  for (const auto& v : violations) err << "threshold violated: " << v << '\n';
  return violations.empty() ? kExitOk : kExitThreshold;
}

int cmd_swap(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Dataset data = load_manifest(c.manifest);
  const auto params = load_net(c.checkpoint);
  const eval::SwapReport report = eval::heading_swap_test(data.sequences, params, c.swap);
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : report.trials) {
    trials.push_back({{"sequence", data.names[t.sequence]},
                      {"robot_a", t.robot_a},
                      {"robot_b", t.robot_b},
                      {"start", t.start},
                      {"recovered", t.recovered},
                      {"recovery_frames", t.recovery_frames},
                      {"pair_accuracy_before", t.pair_before.rate()},
                      {"pair_accuracy_during", t.pair_during.rate()}});
  }
  const double fraction = report.recovered_fraction();
  write_text(fs::path(c.out) / "swap.json",
             nlohmann::json{{"window", c.swap.window},
                            {"max_recovery", c.swap.max_recovery},
                            {"recovered_fraction", fraction},
                            {"trials", trials}}
                     .dump(2) +
                 "\n");
  out << "recovered " << fraction << " of " << report.trials.size() << " trials\n";
  if (c.min_recovered && fraction < *c.min_recovered) {
    err << "threshold violated: recovered fraction " << fraction << " below " << *c.min_recovered << '\n';
    return kExitThreshold;
  }
  return kExitOk;
}

int cmd_shuffle(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Dataset data = load_manifest(c.manifest);
  const auto params = load_net(c.checkpoint);
  const eval::ShuffleReport r = eval::shuffle_control_test(data.sequences, params, c.shuffle_seed);
  const double gap = r.ordered.rate() - r.shuffled.rate();
  write_text(fs::path(c.out) / "shuffle.json",
             nlohmann::json{{"ordered", r.ordered.rate()}, {"shuffled", r.shuffled.rate()}, {"gap", gap}}.dump(2) +
                 "\n");
  out << "ordered " << r.ordered.rate() << ", shuffled " << r.shuffled.rate() << '\n';
  if (c.min_shuffle_gap && gap < *c.min_shuffle_gap) {
    err << "threshold violated: gap " << gap << " below " << *c.min_shuffle_gap << '\n';
    return kExitThreshold;
  }
  return kExitOk;
}

#ifndef ROBOTID_NO_SERVER
SessionServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Dataset data = load_manifest(c.manifest);
  const auto picked = pick_sequences(data.sequences.size(), c.session_sequences, c.session_seed);
  std::vector<core::SequenceRecord> seqs;
  std::vector<std::string> names;
  for (std::size_t i : picked) {
    seqs.push_back(data.sequences[i]);
    names.push_back(data.names[i]);
  }
  SessionServer server(Session(std::move(seqs), std::move(names)), c.static_dir);
  const int port = server.bind(c.host, c.port);
  out << "listening on http://" << c.host << ':' << port << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  write_text(fs::path(c.out) / "session_report.json", server.report().dump(2) + "\n");
  err << "session report written\n";
  return kExitOk;
}
#endif

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Identification of visually identical robots: simulate, train, evaluate, serve"};
  app.name("robotid");
  app.require_subcommand(1);
  // Subcommand config pointers are never read by CLI11, so the file lives on
  // the top-level app and keys sit under a [<command>] section.
  app.set_config("--config", "", "Read options from a file written to <out>/<command>.toml");
  app.fallthrough();

  auto* simulate = app.add_subcommand("simulate", "Generate a dataset of simulated sequences");
  auto* train = app.add_subcommand("train", "Train (or fine-tune) the network");
  auto* infer = app.add_subcommand("infer", "Per-frame labels and filtered locations from a checkpoint");
  auto* evaluate = app.add_subcommand("eval", "Benchmark methods on a dataset");
  auto* swap = app.add_subcommand("swap-test", "Heading-swap recovery experiment");
  auto* shuffle = app.add_subcommand("shuffle-test", "Ordered versus frame-shuffled success");
  for (CLI::App* sub : {simulate, train, infer, evaluate, swap, shuffle}) add_output_options(*sub, config);
#ifndef ROBOTID_NO_SERVER
  auto* serve = app.add_subcommand("serve", "HTTP session for the human labelling UI");
  add_output_options(*serve, config);
  serve->add_option("--manifest", config.manifest, "Manifest to draw session sequences from");
  add_serve_options(*serve, config);
#endif
  add_sim_options(*simulate, config);

  train->add_option("--manifest", config.manifest, "Training manifest");
  train->add_option("--checkpoint", config.checkpoint, "Output checkpoint (default <out>/model.ckpt)");
  add_train_options(*train, config);

  infer->add_option("--checkpoint", config.checkpoint, "Network checkpoint");
  infer->add_option("--input", config.input, "Sequence file");
  infer->add_option("--manifest", config.manifest, "Manifest of sequence files");

  evaluate->add_option("--manifest", config.manifest, "Test manifest");
  evaluate->add_option("--checkpoint", config.checkpoint, "Network checkpoint for the net method");
  add_baseline_options(*evaluate, config);
  add_threshold_options(*evaluate, config);

  swap->add_option("--manifest", config.manifest, "Test manifest");
  swap->add_option("--checkpoint", config.checkpoint, "Network checkpoint");
  add_swap_options(*swap, config);

  shuffle->add_option("--manifest", config.manifest, "Test manifest");
  shuffle->add_option("--checkpoint", config.checkpoint, "Network checkpoint");
  add_shuffle_options(*shuffle, config);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    validate(config, command);
    fs::create_directories(config.out);
    write_text(fs::path(config.out) / (command + ".toml"), "[" + command + "]\n" + chosen->config_to_str(true, false));
    if (command == "simulate") return cmd_simulate(config, out, err);
    if (command == "train") return cmd_train(config, out, err);
    if (command == "infer") return cmd_infer(config, out, err);
    if (command == "eval") return cmd_eval(config, out, err);
    if (command == "swap-test") return cmd_swap(config, out, err);
    if (command == "shuffle-test") return cmd_shuffle(config, out, err);
#ifndef ROBOTID_NO_SERVER
    if (command == "serve") return cmd_serve(config, out, err);
#endif
    throw std::logic_error("unhandled command " + command);
  } catch (const std::exception& e) {
    err << "robotid " << command << ": " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace robotid::cli
