// SPDX-License-Identifier: Apache-2.0
#include "robotid/eval/benchmark.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

#include "robotid/baselines/jpda.hpp"
#include "robotid/baselines/kalman_ha.hpp"
#include "robotid/core/sequence_io.hpp"
#include "robotid/net/network.hpp"
#include "robotid/tracker/filtered_track.hpp"

namespace robotid::eval {

namespace {

std::vector<Position> track_positions(const baselines::TrackSet& tracks) {
  std::vector<Position> out;
  out.reserve(tracks.last_position.size());
  for (const auto& p : tracks.last_position) {
    out.push_back(p ? Position{(*p)(0), (*p)(1)} : kFieldCentre);
  }
  return out;
}

MethodRun run_baseline(Method method, const core::SequenceRecord& sequence,
                       const baselines::BaselineConfig& config) {
  const baselines::SensorModel sensor = baselines::make_sensor_model(sequence.meta, config);
  baselines::TrackSet tracks(sequence.meta.n_robots);
  MethodRun run;
  run.labels.reserve(sequence.frames.size());
  run.positions.reserve(sequence.frames.size());
  for (const auto& frame : sequence.frames) {
    switch (method) {
      case Method::kalman_ha:
        run.labels.push_back(baselines::kalman_ha_step(tracks, frame.input, sensor, config));
        break;
      case Method::kalman_ha2:
        run.labels.push_back(baselines::kalman_ha2_step(tracks, frame.input, sensor, config));
        break;
      case Method::jpda:
        run.labels.push_back(baselines::jpda_step(tracks, frame.input, sensor, config).label);
        break;
      case Method::net:
        throw std::logic_error("run_baseline: net is not a baseline");
    }
    run.positions.push_back(track_positions(tracks));
  }
  return run;
}

MethodRun run_net(const core::SequenceRecord& sequence, const std::shared_ptr<const net::NetworkParams>& params) {
  if (!params) throw std::invalid_argument("benchmark: the net method needs a checkpoint");
  const auto& arch = params->arch();
  if (arch.n_robots != sequence.meta.n_robots || arch.n_slots != sequence.meta.n_slots) {
    throw std::invalid_argument("benchmark: checkpoint shape does not match the sequence");
  }
  net::InferenceSession session(params);
  tracker::LowPassTracker filter(sequence.meta.n_robots);
  MethodRun run;
  run.labels.reserve(sequence.frames.size());
  run.positions.reserve(sequence.frames.size());
  for (const auto& frame : sequence.frames) {
    net::FramePrediction p = session.step(frame.input);
    filter.update(frame.input, p.robot_slot, p.robot_prob);
    std::vector<Position> pos;
    pos.reserve(filter.tracks().size());
    for (const auto& t : filter.tracks()) pos.push_back(t.initialized ? Position{t.x, t.y} : kFieldCentre);
    run.positions.push_back(std::move(pos));
    run.labels.push_back(std::move(p.label));
  }
  return run;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kalman_ha: return "kalman-ha";
    case Method::kalman_ha2: return "kalman-ha2";
    case Method::jpda: return "jpda";
    case Method::net: return "net";
  }
  throw std::invalid_argument("method_name: bad method");
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kalman_ha, Method::kalman_ha2, Method::jpda, Method::net}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_method(item));
  }
  return out;
}

MethodRun run_method(Method method, const core::SequenceRecord& sequence,
                     const baselines::BaselineConfig& baseline,
                     const std::shared_ptr<const net::NetworkParams>& params) {
  return method == Method::net ? run_net(sequence, params) : run_baseline(method, sequence, baseline);
}

const MethodScore* EvalReport::find(Method m) const {
  for (const auto& s : methods) {
    if (s.method == m) return &s;
  }
  return nullptr;
}

EvalReport run_benchmark(const std::vector<core::SequenceRecord>& sequences,
                         const std::vector<std::string>& names,
                         const std::vector<Method>& methods,
                         const baselines::BaselineConfig& baseline,
                         const std::shared_ptr<const net::NetworkParams>& params) {
  if (names.size() != sequences.size()) throw std::invalid_argument("benchmark: one name per sequence");
  baseline.validate();
  for (Method m : methods) {
    if (m == Method::net && !params) throw std::invalid_argument("benchmark: the net method needs a checkpoint");
  }
  EvalReport report;
  for (Method m : methods) {
    MethodScore score;
    score.method = m;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
      const auto& seq = sequences[i];
      const MethodRun run = run_method(m, seq, baseline, params);
      SequenceScore s;
      s.name = names[i];
      s.success = count_success(run.labels, seq.frames);
      s.localization = localization_error(run.positions, seq.frames, seq.meta.field_width,
                                          seq.meta.field_height);
      score.success += s.success;
      score.localization += s.localization;
      score.sequences.push_back(std::move(s));
    }
    report.methods.push_back(std::move(score));
  }
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json out;
  out["success_rate_counts_clutter"] = true;
  out["metadata"] = report.metadata;
  out["methods"] = nlohmann::json::array();
  for (const auto& m : report.methods) {
    nlohmann::json jm;
    jm["method"] = method_name(m.method);
    jm["success_rate"] = m.success.rate();
    jm["correct"] = m.success.correct;
    jm["detections"] = m.success.total;
    jm["localization_error_m"] = m.localization.mean();
    jm["localized_pairs"] = m.localization.count;
    jm["sequences"] = nlohmann::json::array();
    for (const auto& s : m.sequences) {
      jm["sequences"].push_back({{"name", s.name},
                                 {"success_rate", s.success.rate()},
                                 {"correct", s.success.correct},
                                 {"detections", s.success.total},
                                 {"localization_error_m", s.localization.mean()}});
    }
    out["methods"].push_back(std::move(jm));
  }
  return out;
}

void write_report_table(const EvalReport& report, std::ostream& out) {
  out << "method,sequence,success_rate,correct,detections,localization_error_m\n";
  for (const auto& m : report.methods) {
    const std::string name = method_name(m.method);
    for (const auto& s : m.sequences) {
      out << name << ',' << s.name << ',' << core::format_double(s.success.rate()) << ','
          << s.success.correct << ',' << s.success.total << ','
          << core::format_double(s.localization.mean()) << '\n';
    }
    out << name << ",all," << core::format_double(m.success.rate()) << ',' << m.success.correct
        << ',' << m.success.total << ',' << core::format_double(m.localization.mean()) << '\n';
  }
}

std::vector<std::string> check_thresholds(const EvalReport& report, const EvalThresholds& limits) {
  std::vector<std::string> out;
  const MethodScore* net = report.find(Method::net);
  const MethodScore* ha = report.find(Method::kalman_ha);
  const MethodScore* ha2 = report.find(Method::kalman_ha2);
  const MethodScore* jpda = report.find(Method::jpda);
  auto fmt = [](double v) { return core::format_double(v); };
  if (limits.min_net_success) {
    if (!net) {
      out.push_back("min_net_success set but net was not evaluated");
    } else if (net->success.rate() < *limits.min_net_success) {
      out.push_back("net success " + fmt(net->success.rate()) + " below " + fmt(*limits.min_net_success));
    }
  }
  if (limits.min_net_margin_over_ha) {
    if (!net || !ha) {
      out.push_back("min_net_margin_over_ha needs both net and kalman-ha");
    } else if (net->success.rate() - ha->success.rate() < *limits.min_net_margin_over_ha) {
      out.push_back("net leads kalman-ha by " + fmt(net->success.rate() - ha->success.rate()) +
                    ", below " + fmt(*limits.min_net_margin_over_ha));
    }
  }
  if (limits.require_localization_order) {
    if (!net || !ha || !ha2 || !jpda) {
      out.push_back("localization order needs net, kalman-ha, kalman-ha2 and jpda");
    } else {
      const double e_net = net->localization.mean();
      const double e_ha = ha->localization.mean();
      const double e_ha2 = ha2->localization.mean();
      const double e_jpda = jpda->localization.mean();
      if (e_net > e_jpda) out.push_back("net localization error exceeds jpda");
      if (e_net > e_ha2) out.push_back("net localization error exceeds kalman-ha2");
      if (e_ha2 > e_ha) out.push_back("kalman-ha2 localization error exceeds kalman-ha");
    }
  }
  return out;
}

}  // namespace robotid::eval
