// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "robotid/baselines/config.hpp"
#include "robotid/core/types.hpp"
#include "robotid/eval/metrics.hpp"
#include "robotid/net/params.hpp"

namespace robotid::eval {

enum class Method { kalman_ha, kalman_ha2, jpda, net };

/// "kalman-ha", "kalman-ha2", "jpda", "net".
std::string method_name(Method m);
/// Inverse of method_name; throws std::invalid_argument on unknown names.
Method parse_method(const std::string& name);
/// Comma-separated list; an empty string gives an empty list.
std::vector<Method> parse_methods(const std::string& list);

/// Per-frame output of one method on one sequence.
struct MethodRun {
  std::vector<core::AssignmentLabel> labels;
  std::vector<std::vector<Position>> positions;  // per frame, per robot
};

/// Runs one method over a sequence from a fresh state. `params` is required
/// for Method::net and ignored otherwise.
MethodRun run_method(Method method, const core::SequenceRecord& sequence,
                     const baselines::BaselineConfig& baseline,
                     const std::shared_ptr<const net::NetworkParams>& params);

struct SequenceScore {
  std::string name;
  SuccessCounts success;
  LocalizationSum localization;
};

struct MethodScore {
  Method method = Method::net;
  SuccessCounts success;
  LocalizationSum localization;
  std::vector<SequenceScore> sequences;
};

struct EvalReport {
  std::vector<MethodScore> methods;
  nlohmann::json metadata = nlohmann::json::object();

  /// nullptr when the method was not run.
  [[nodiscard]] const MethodScore* find(Method m) const;
};

/// Scores every method on every sequence. All methods see the same frames.
/// Throws std::invalid_argument when the net is requested without
/// parameters, when names and sequences differ in length, or when the
/// network shape does not match a sequence.
EvalReport run_benchmark(const std::vector<core::SequenceRecord>& sequences,
                         const std::vector<std::string>& names,
                         const std::vector<Method>& methods,
                         const baselines::BaselineConfig& baseline,
                         const std::shared_ptr<const net::NetworkParams>& params);

nlohmann::json to_json(const EvalReport& report);
/// One row per (method, sequence) plus an "all" row per method.
void write_report_table(const EvalReport& report, std::ostream& out);

/// Limits checked after a benchmark; unset fields are not checked.
struct EvalThresholds {
  std::optional<double> min_net_success;
  std::optional<double> min_net_margin_over_ha;  // fraction, e.g. 0.05
  bool require_localization_order = false;
};

/// Human-readable descriptions of every violated threshold.
std::vector<std::string> check_thresholds(const EvalReport& report, const EvalThresholds& limits);

}  // namespace robotid::eval
