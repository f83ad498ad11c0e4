// Copyright 2026 The qsdc-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSDC_EXPERIMENT_HPP
#define QSDC_EXPERIMENT_HPP

// Experiment configuration (JSON), single-session reports, and parameter
// sweeps aggregated into CSV.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsdc/adversary.hpp"
#include "qsdc/fabric.hpp"
#include "qsdc/session.hpp"

namespace qsdc {

struct SweepAxis {
  std::string name;
  std::vector<Json> values;
};

struct ExperimentConfig {
  SessionConfig session;
  AttackSpec attack;
  std::size_t trials = 1;
  std::vector<SweepAxis> sweep;
};

/// Throws ConfigError on unknown keys, wrong types or inconsistent values.
ExperimentConfig parse_experiment(const Json& j);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Sets one top-level field, as used by sweep axes and CLI overrides.
void set_field(ExperimentConfig& config, std::string_view key, const Json& value);

/// Effective configuration, normalized.
Json to_json(const ExperimentConfig& config);
Json to_json(const AttackReport& report);

/// JSON report for one session.
Json session_report(const ExperimentConfig& config, const SessionOutcome& outcome);

/// Pretty-printed report with a trailing newline; the byte-stable form.
std::string render_json(const Json& j);

/// Runs one session with config.session.seed.
SessionOutcome run_experiment_session(const ExperimentConfig& config);

struct AggregateStats {
  std::size_t trials = 0;
  std::size_t detections = 0;
  std::size_t aborts = 0;
  double detection_freq = 0.0;
  /// 3 * binomial standard error of detection_freq.
  double detection_3sigma = 0.0;
  double mean_error_rate = 0.0;
  /// Standard error of mean_error_rate across trials.
  double error_stderr = 0.0;
  /// Mean per-session message accuracy (attacker's guess where the strategy
  /// produces one, otherwise the receiver's decode); nullopt if no session
  /// produced one.
  std::optional<double> accuracy;
  std::size_t check_photons = 0;
  std::size_t check_errors = 0;
};

class StatsAccumulator {
 public:
  void add(const SessionOutcome& outcome);
  AggregateStats finish() const;

 private:
  std::size_t trials_ = 0;
  std::size_t detections_ = 0;
  std::size_t aborts_ = 0;
  double err_sum_ = 0.0;
  double err_sq_sum_ = 0.0;
  double acc_sum_ = 0.0;
  std::size_t acc_n_ = 0;
  std::size_t check_photons_ = 0;
  std::size_t check_errors_ = 0;
};

/// Per-session message accuracy as aggregated in AggregateStats.
std::optional<double> session_accuracy(const SessionOutcome& outcome);

/// `trials` sessions with seeds derive_seed(config seed, t).
AggregateStats run_trials(const ExperimentConfig& config);

struct SweepPoint {
  std::vector<Json> values;
  AggregateStats stats;
};

/// Cartesian product of the sweep axes, row-major in declaration order.
/// Point i uses master seed derive_seed(config seed, i). Points are spread
/// over `workers` threads (0 = hardware concurrency); results do not depend
/// on the worker count.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& config, unsigned workers = 0);

std::string sweep_csv_header(const ExperimentConfig& config);
std::string sweep_csv(const ExperimentConfig& config, const std::vector<SweepPoint>& points);

}  // namespace qsdc

#endif  // QSDC_EXPERIMENT_HPP
