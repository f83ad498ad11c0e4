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

// Command-line harness: run, sweep, selftest.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsdc/errors.hpp"
#include "qsdc/experiment.hpp"
#include "qsdc/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;

struct Overrides {
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
};

qsdc::Json parse_override_value(const std::string& text) {
  try {
    return qsdc::Json::parse(text);
  } catch (const qsdc::Json::parse_error&) {
    return qsdc::Json(text);
  }
}

qsdc::ExperimentConfig load(const std::string& path, const Overrides& o) {
  qsdc::ExperimentConfig config = qsdc::load_experiment(path);
  for (const std::string& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw qsdc::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    qsdc::set_field(config, kv.substr(0, eq), parse_override_value(kv.substr(eq + 1)));
  }
  if (o.seed) config.session.seed = *o.seed;
  if (o.trials) qsdc::set_field(config, "trials", qsdc::Json(*o.trials));
  return config;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Override the master seed");
  cmd->add_option("--trials", o.trials, "Override the trial count");
  cmd->add_option("--set", o.sets, "Override a config field (key=JSON value)");
}

int cmd_run(const std::string& config_path, const Overrides& o, const std::string& transcript,
            const std::string& out_path) {
  qsdc::ExperimentConfig config = load(config_path, o);
  config.session.validate();
  const qsdc::SessionOutcome outcome = qsdc::run_experiment_session(config);
  qsdc::Json report = qsdc::session_report(config, outcome);
  if (config.trials > 1) {
    const qsdc::AggregateStats s = qsdc::run_trials(config);
    report["aggregate"] = qsdc::Json{
        {"trials", s.trials},
        {"detection_freq", s.detection_freq},
        {"detection_3sigma", s.detection_3sigma},
        {"mean_error_rate", s.mean_error_rate},
        {"stderr", s.error_stderr},
        {"accuracy", s.accuracy ? qsdc::Json(*s.accuracy) : qsdc::Json(nullptr)},
        {"check_photons", s.check_photons},
        {"check_errors", s.check_errors}};
  }
  if (!transcript.empty()) write_file(transcript, outcome.transcript.to_jsonl());
  const std::string text = qsdc::render_json(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const Overrides& o, const std::string& out_dir,
              unsigned workers) {
  const qsdc::ExperimentConfig config = load(config_path, o);
  const auto points = qsdc::run_sweep(config, workers);
  const std::string csv = qsdc::sweep_csv(config, points);
  if (out_dir.empty()) {
    std::cout << csv;
  } else {
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / "sweep.csv", csv);
    write_file(std::filesystem::path(out_dir) / "config.json",
               qsdc::render_json(qsdc::to_json(config)));
  }
  return kExitOk;
}

int cmd_selftest(double perturb_h) {
  const qsdc::GateSet gates =
      perturb_h != 0.0 ? qsdc::perturbed_hadamard(perturb_h) : qsdc::GateSet::canonical();
  const qsdc::SelfTestReport report = qsdc::run_selftest(gates);
  for (const qsdc::SelfTestCheck& c : report.checks) {
    std::cout << (c.passed() ? "PASS " : "FAIL ") << c.name << " (" << c.cases << " cases)\n";
    for (const std::string& f : c.failures) std::cerr << "  " << c.name << ": " << f << "\n";
  }
  std::printf("selftest: %zu/%zu checks passed in %.2f s\n",
              report.checks.size() - report.failure_count(), report.checks.size(),
              report.seconds);
  return report.passed() ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum secure direct communication simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string transcript;
  std::string out;
  unsigned workers = 0;
  double perturb_h = 0.0;
  Overrides run_o;
  Overrides sweep_o;

  CLI::App* run = app.add_subcommand("run", "Run one session and print a JSON report");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--transcript", transcript, "Write the session transcript (JSON Lines)");
  run->add_option("--out", out, "Write the report here instead of stdout");
  add_overrides(run, run_o);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep and emit CSV");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sweep->add_option("--out", out, "Output directory (writes sweep.csv)");
  sweep->add_option("--workers", workers, "Worker threads (0 = all cores)");
  add_overrides(sweep, sweep_o);

  CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in consistency suite");
  selftest->add_option("--perturb-h", perturb_h)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, run_o, transcript, out);
    if (*sweep) return cmd_sweep(config_path, sweep_o, out, workers);
    if (*selftest) return cmd_selftest(perturb_h);
  } catch (const qsdc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
