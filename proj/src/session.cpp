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

#include "qsdc/session.hpp"

#include <array>
#include <cmath>
#include <set>

#include "qsdc/errors.hpp"

namespace qsdc {

std::string_view to_string(Protocol p) { return p == Protocol::Qsdc ? "qsdc" : "mcqsdc"; }

Protocol parse_protocol(std::string_view s) {
  if (s == "qsdc") return Protocol::Qsdc;
  if (s == "mcqsdc") return Protocol::Mcqsdc;
  throw ConfigError("unknown protocol '" + std::string(s) + "'");
}

std::size_t SessionConfig::check_size(std::size_t n) const {
  if (check_count) {
    return *check_count;
  }
  return static_cast<std::size_t>(std::lround(check_fraction * static_cast<double>(n)));
}

void SessionConfig::validate() const {
  if (photons == 0) {
    throw ConfigError("photons must be at least 1");
  }
  if (!check_count && !(check_fraction > 0.0 && check_fraction < 1.0)) {
    throw ConfigError("check_fraction must lie in (0, 1)");
  }
  const std::size_t c = check_size(photons);
  if (c == 0) {
    throw ConfigError("check set would be empty");
  }
  if (c >= photons) {
    throw ConfigError("check set leaves no photons for the message");
  }
  if (!(error_threshold >= 0.0 && error_threshold <= 1.0)) {
    throw ConfigError("error_threshold must lie in [0, 1]");
  }
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw ConfigError("loss must lie in [0, 1]");
  }
  if (!(noise.p >= 0.0 && noise.p <= 1.0)) {
    throw ConfigError("noise probability must lie in [0, 1]");
  }
  if (protocol == Protocol::Qsdc && !controllers.empty()) {
    throw ConfigError("the two-party protocol takes no controllers");
  }
  std::set<std::string> names(controllers.begin(), controllers.end());
  if (names.size() != controllers.size()) {
    throw ConfigError("controller names must be distinct");
  }
  for (const std::string& name : controllers) {
    if (name == "Alice" || name == "Bob" || name.empty()) {
      throw ConfigError("invalid controller name '" + name + "'");
    }
  }
  for (std::size_t w : withheld_releases) {
    if (w >= controllers.size()) {
      throw ConfigError("withheld release refers to unknown controller index");
    }
  }
  if (message) {
    for (Bit b : *message) {
      if (b > 1) throw ConfigError("message bits must be 0 or 1");
    }
    if (loss > 0.0) {
      throw ConfigError("an explicit message requires loss 0");
    }
    if (message->size() != photons - c) {
      throw ConfigError("message length must equal photons minus check-set size (" +
                        std::to_string(photons - c) + ")");
    }
  }
}

std::vector<std::string> default_controller_names(std::size_t m) {
  static const std::array<const char*, 23> kPool = {
      "Charlie", "Dick", "Emma", "Frank", "Grace", "Henry", "Iris", "Jack",
      "Kate",    "Leo",  "Mia",  "Nick",  "Olga",  "Paul",  "Quinn", "Rosa",
      "Sam",     "Tina", "Uma",  "Victor", "Wendy", "Xena", "York"};
  std::vector<std::string> out;
  if (m == 0) return out;
  if (m == 1) return {"Charlie"};
  for (std::size_t i = 0; i + 1 < m; ++i) {
    out.push_back(i < kPool.size() ? kPool[i] : "Controller" + std::to_string(i + 1));
  }
  out.emplace_back("Zach");
  return out;
}

std::optional<double> SessionOutcome::decode_accuracy() const {
  if (!message_decoded || message_decoded->size() != delivered.size()) {
    return std::nullopt;
  }
  if (delivered.empty()) return std::nullopt;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < delivered.size(); ++i) {
    correct += (*message_decoded)[i] == message_sent.at(delivered[i]);
  }
  return static_cast<double>(correct) / static_cast<double>(delivered.size());
}

}  // namespace qsdc
