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

#include "qsdc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "qsdc/errors.hpp"
#include "qsdc/stats.hpp"

namespace qsdc {

namespace {

std::string key_str(std::string_view key) { return std::string(key); }

std::uint64_t as_uint(const Json& v, std::string_view key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw ConfigError("'" + key_str(key) + "' must be a non-negative integer");
}

double as_number(const Json& v, std::string_view key) {
  if (!v.is_number()) throw ConfigError("'" + key_str(key) + "' must be a number");
  return v.get<double>();
}

bool as_bool(const Json& v, std::string_view key) {
  if (!v.is_boolean()) throw ConfigError("'" + key_str(key) + "' must be a boolean");
  return v.get<bool>();
}

std::string as_string(const Json& v, std::string_view key) {
  if (!v.is_string()) throw ConfigError("'" + key_str(key) + "' must be a string");
  return v.get<std::string>();
}

MessageBits parse_bits(const std::string& s) {
  MessageBits bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw ConfigError("message must be a string of 0s and 1s");
    bits.push_back(c == '1');
  }
  return bits;
}

std::string bits_string(const MessageBits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (Bit b : bits) s.push_back(b ? '1' : '0');
  return s;
}

void set_noise(SessionConfig& s, const Json& v) {
  if (v.is_string()) {
    s.noise.kind = parse_noise_kind(v.get<std::string>());
    return;
  }
  if (!v.is_object()) throw ConfigError("'noise' must be an object or a kind name");
  NoiseModel n;
  for (const auto& [k, val] : v.items()) {
    if (k == "kind") {
      n.kind = parse_noise_kind(as_string(val, "noise.kind"));
    } else if (k == "p") {
      n.p = as_number(val, "noise.p");
    } else {
      throw ConfigError("unknown noise field '" + k + "'");
    }
  }
  s.noise = n;
}

void set_attack(AttackSpec& a, const Json& v) {
  if (v.is_string()) {
    a = AttackSpec{};
    a.kind = parse_attack_kind(v.get<std::string>());
    return;
  }
  if (!v.is_object()) throw ConfigError("'attack' must be an object or a strategy name");
  AttackSpec spec;
  for (const auto& [k, val] : v.items()) {
    if (k == "name") {
      spec.kind = parse_attack_kind(as_string(val, "attack.name"));
    } else if (k == "schedule") {
      const std::string s = as_string(val, "attack.schedule");
      if (s == "random") {
        spec.schedule = ScheduleVariant::RandomOrder;
      } else if (s == "fixed") {
        spec.schedule = ScheduleVariant::FixedOrder;
      } else {
        throw ConfigError("attack.schedule must be 'random' or 'fixed'");
      }
    } else if (k == "disclose_permutation") {
      spec.disclose_permutation = as_bool(val, "attack.disclose_permutation");
    } else if (k == "disclose_initial_states") {
      spec.disclose_initial_states = as_bool(val, "attack.disclose_initial_states");
    } else {
      throw ConfigError("unknown attack field '" + k + "'");
    }
  }
  a = spec;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return s;
}

}  // namespace

void set_field(ExperimentConfig& config, std::string_view key, const Json& value) {
  SessionConfig& s = config.session;
  if (key == "protocol") {
    s.protocol = parse_protocol(as_string(value, key));
  } else if (key == "photons") {
    s.photons = as_uint(value, key);
  } else if (key == "check_fraction") {
    s.check_fraction = as_number(value, key);
  } else if (key == "check_count") {
    if (value.is_null()) {
      s.check_count.reset();
    } else {
      s.check_count = as_uint(value, key);
    }
  } else if (key == "error_threshold") {
    s.error_threshold = as_number(value, key);
  } else if (key == "noise") {
    set_noise(s, value);
  } else if (key == "noise_p") {
    s.noise.p = as_number(value, key);
    if (s.noise.kind == NoiseKind::None && s.noise.p > 0.0) {
      throw ConfigError("'noise_p' needs a noise kind other than none");
    }
  } else if (key == "loss") {
    s.loss = as_number(value, key);
  } else if (key == "controllers") {
    if (value.is_array()) {
      std::vector<std::string> names;
      for (const Json& n : value) names.push_back(as_string(n, "controllers[]"));
      s.controllers = std::move(names);
    } else {
      s.controllers = default_controller_names(as_uint(value, key));
    }
  } else if (key == "withhold_releases") {
    if (!value.is_array()) throw ConfigError("'withhold_releases' must be an array");
    s.withheld_releases.clear();
    for (const Json& w : value) s.withheld_releases.push_back(as_uint(w, "withhold_releases[]"));
  } else if (key == "message") {
    if (value.is_null()) {
      s.message.reset();
    } else {
      s.message = parse_bits(as_string(value, key));
    }
  } else if (key == "seed") {
    s.seed = as_uint(value, key);
  } else if (key == "trials") {
    config.trials = as_uint(value, key);
    if (config.trials == 0) throw ConfigError("'trials' must be at least 1");
  } else if (key == "attack") {
    set_attack(config.attack, value);
  } else {
    throw ConfigError("unknown config field '" + key_str(key) + "'");
  }
}

ExperimentConfig parse_experiment(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "sweep") {
      if (!value.is_object()) throw ConfigError("'sweep' must be an object of axis -> values");
      for (const auto& [axis, values] : value.items()) {
        if (axis == "sweep" || axis == "trials") {
          throw ConfigError("'" + axis + "' cannot be a sweep axis");
        }
        if (!values.is_array() || values.empty()) {
          throw ConfigError("sweep axis '" + axis + "' needs a nonempty array");
        }
        ExperimentConfig probe = config;
        set_field(probe, axis, values.front());  // rejects unknown axes early
        config.sweep.push_back({axis, std::vector<Json>(values.begin(), values.end())});
      }
    } else {
      set_field(config, key, value);
    }
  }
  // Validate what can be validated without sweep values applied.
  if (config.sweep.empty()) config.session.validate();
  return config;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  return parse_experiment(j);
}

Json to_json(const ExperimentConfig& config) {
  const SessionConfig& s = config.session;
  Json j;
  j["protocol"] = to_string(s.protocol);
  j["photons"] = s.photons;
  j["check_fraction"] = s.check_fraction;
  j["check_count"] = s.check_count ? Json(*s.check_count) : Json(nullptr);
  j["error_threshold"] = s.error_threshold;
  j["noise"] = Json{{"kind", to_string(s.noise.kind)}, {"p", s.noise.p}};
  j["loss"] = s.loss;
  if (s.protocol == Protocol::Mcqsdc) {
    j["controllers"] = s.controllers;
    j["withhold_releases"] = s.withheld_releases;
  }
  j["message"] = s.message ? Json(bits_string(*s.message)) : Json(nullptr);
  Json attack{{"name", to_string(config.attack.kind)}};
  if (config.attack.kind == AttackKind::Collusion) {
    attack["schedule"] = std::string(to_string(config.attack.schedule));
  }
  if (config.attack.kind == AttackKind::TapBAGuessMessage) {
    attack["disclose_permutation"] = config.attack.disclose_permutation;
    attack["disclose_initial_states"] = config.attack.disclose_initial_states;
  }
  j["attack"] = std::move(attack);
  j["trials"] = config.trials;
  j["seed"] = s.seed;
  if (!config.sweep.empty()) {
    Json sweep = Json::object();
    for (const SweepAxis& a : config.sweep) sweep[a.name] = a.values;
    j["sweep"] = std::move(sweep);
  }
  return j;
}

Json to_json(const AttackReport& r) {
  Json j;
  j["strategy"] = r.strategy;
  j["detected"] = r.detected;
  j["check_error_rate"] = r.check_error_rate;
  j["message_guess_accuracy"] =
      r.message_guess_accuracy ? Json(*r.message_guess_accuracy) : Json(nullptr);
  j["trials"] = r.trials;
  j["tapped_legs"] = r.tapped_legs;
  j["corrupted_parties"] = r.corrupted_parties;
  return j;
}

Json session_report(const ExperimentConfig& config, const SessionOutcome& outcome) {
  Json j;
  j["config"] = to_json(config);
  j["seed"] = config.session.seed;
  j["attack_name"] = config.attack.name();
  j["aborted"] = outcome.aborted;
  if (!outcome.abort_reason.empty()) j["abort_reason"] = outcome.abort_reason;
  j["error_rate"] = outcome.error_rate;
  j["check_photons"] = outcome.checked;
  j["check_errors"] = outcome.mismatches;
  j["message_sent"] = bits_string(outcome.message_sent);
  j["message_decoded"] =
      outcome.message_decoded ? Json(bits_string(*outcome.message_decoded)) : Json(nullptr);
  Json lost = Json::array();
  {
    std::size_t d = 0;
    for (std::size_t i = 0; i < outcome.message_sent.size(); ++i) {
      if (d < outcome.delivered.size() && outcome.delivered[d] == i) {
        ++d;
      } else {
        lost.push_back(i);
      }
    }
  }
  j["lost_bits"] = std::move(lost);
  if (config.session.protocol == Protocol::Mcqsdc) {
    j["control"] = Json{
        {"refused", outcome.control_refused},
        {"withheld", config.session.withheld_releases},
        {"best_guess_accuracy", outcome.withheld_guess_accuracy
                                    ? Json(*outcome.withheld_guess_accuracy)
                                    : Json(nullptr)}};
  }
  if (outcome.attack) j["attack"] = to_json(*outcome.attack);
  return j;
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

SessionOutcome run_experiment_session(const ExperimentConfig& config) {
  return run_session(config.session, config.attack);
}

std::optional<double> session_accuracy(const SessionOutcome& outcome) {
  if (outcome.attack && outcome.attack->message_guess_accuracy) {
    return outcome.attack->message_guess_accuracy;
  }
  if (outcome.withheld_guess_accuracy) return outcome.withheld_guess_accuracy;
  if (outcome.attack && outcome.attack->strategy != "none" &&
      outcome.attack->strategy != "intercept_resend") {
    return std::nullopt;
  }
  return outcome.decode_accuracy();
}

void StatsAccumulator::add(const SessionOutcome& outcome) {
  ++trials_;
  detections_ += outcome.aborted;
  aborts_ += outcome.aborted;
  err_sum_ += outcome.error_rate;
  err_sq_sum_ += outcome.error_rate * outcome.error_rate;
  if (const auto acc = session_accuracy(outcome)) {
    acc_sum_ += *acc;
    ++acc_n_;
  }
  check_photons_ += outcome.checked;
  check_errors_ += outcome.mismatches;
}

AggregateStats StatsAccumulator::finish() const {
  AggregateStats s;
  s.trials = trials_;
  s.detections = detections_;
  s.aborts = aborts_;
  s.check_photons = check_photons_;
  s.check_errors = check_errors_;
  if (trials_ == 0) return s;
  const double n = static_cast<double>(trials_);
  s.detection_freq = static_cast<double>(detections_) / n;
  s.detection_3sigma = 3.0 * binomial_sigma(s.detection_freq, trials_);
  s.mean_error_rate = err_sum_ / n;
  if (trials_ > 1) {
    const double var = std::max(0.0, (err_sq_sum_ - n * s.mean_error_rate * s.mean_error_rate) / (n - 1.0));
    s.error_stderr = std::sqrt(var / n);
  }
  if (acc_n_ > 0) s.accuracy = acc_sum_ / static_cast<double>(acc_n_);
  return s;
}

AggregateStats run_trials(const ExperimentConfig& config) {
  config.session.validate();
  StatsAccumulator acc;
  SessionConfig session = config.session;
  for (std::size_t t = 0; t < config.trials; ++t) {
    session.seed = derive_seed(config.session.seed, t);
    acc.add(run_session(session, config.attack));
  }
  return acc.finish();
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& config, unsigned workers) {
  if (config.sweep.empty()) throw ConfigError("sweep needs at least one axis");

  // Materialize and validate every point's config before running any.
  std::vector<std::vector<Json>> values{{}};
  for (const SweepAxis& axis : config.sweep) {
    std::vector<std::vector<Json>> next;
    for (const auto& prefix : values) {
      for (const Json& v : axis.values) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    values = std::move(next);
  }
  std::vector<ExperimentConfig> configs;
  configs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig c = config;
    c.sweep.clear();
    for (std::size_t a = 0; a < config.sweep.size(); ++a) {
      set_field(c, config.sweep[a].name, values[i][a]);
    }
    c.session.seed = derive_seed(config.session.seed, i);
    c.session.validate();
    configs.push_back(std::move(c));
  }

  std::vector<SweepPoint> points(configs.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        points[i] = SweepPoint{values[i], run_trials(configs[i])};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);
  return points;
}

std::string sweep_csv_header(const ExperimentConfig& config) {
  std::string h;
  for (const SweepAxis& a : config.sweep) h += a.name + ",";
  h += "trials,detection_freq,detection_3sigma,mean_error_rate,stderr,accuracy,check_photons,"
       "check_errors\n";
  return h;
}

std::string sweep_csv(const ExperimentConfig& config, const std::vector<SweepPoint>& points) {
  std::string out = sweep_csv_header(config);
  for (const SweepPoint& p : points) {
    for (const Json& v : p.values) out += csv_cell(v) + ",";
    const AggregateStats& s = p.stats;
    out += std::to_string(s.trials) + "," + format_double(s.detection_freq) + "," +
           format_double(s.detection_3sigma) + "," + format_double(s.mean_error_rate) + "," +
           format_double(s.error_stderr) + "," + (s.accuracy ? format_double(*s.accuracy) : "") +
           "," + std::to_string(s.check_photons) + "," + std::to_string(s.check_errors) + "\n";
  }
  return out;
}

}  // namespace qsdc
