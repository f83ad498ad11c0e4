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

#ifndef QSDC_SESSION_HPP
#define QSDC_SESSION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsdc/fabric.hpp"
#include "qsdc/quantum.hpp"

namespace qsdc {

using MessageBits = std::vector<Bit>;

enum class Protocol : std::uint8_t { Qsdc, Mcqsdc };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view s);

inline constexpr double kDefaultErrorThreshold = 0.05;

struct SessionConfig {
  Protocol protocol = Protocol::Qsdc;
  std::size_t photons = 64;
  double check_fraction = 0.25;
  /// Overrides check_fraction when set.
  std::optional<std::size_t> check_count;
  /// The session aborts iff the measured check error rate exceeds this.
  double error_threshold = kDefaultErrorThreshold;
  NoiseModel noise;
  double loss = 0.0;
  /// Controller names in chain order (Alice -> first ... last -> Bob).
  std::vector<std::string> controllers;
  /// Controllers (by chain index) that refuse to release their records.
  std::vector<std::size_t> withheld_releases;
  /// Bob's message. Drawn at random when absent.
  std::optional<MessageBits> message;
  std::uint64_t seed = 0;

  /// Check-set size for `n` photons available to Bob.
  std::size_t check_size(std::size_t n) const;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Default controller names for a chain of `m`. The last controller is Zach.
std::vector<std::string> default_controller_names(std::size_t m);

struct AttackReport {
  std::string strategy = "none";
  bool detected = false;
  double check_error_rate = 0.0;
  /// Per-bit accuracy of the attacker's message guess, for strategies that
  /// produce one.
  std::optional<double> message_guess_accuracy;
  std::size_t trials = 1;
  std::vector<std::string> tapped_legs;
  std::vector<std::string> corrupted_parties;
};

struct SessionOutcome {
  bool aborted = false;
  std::string abort_reason;
  double error_rate = 0.0;
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  MessageBits message_sent;
  /// Decoded bits for the `delivered` message indices, in order. Absent when
  /// the session aborted or, in the controlled protocol, when reconstruction
  /// was refused for want of a release.
  std::optional<MessageBits> message_decoded;
  std::vector<std::size_t> delivered;
  bool control_refused = false;
  /// Receiver's best per-bit accuracy without the withheld release(s).
  std::optional<double> withheld_guess_accuracy;
  std::optional<AttackReport> attack;
  Transcript transcript;

  /// Fraction of delivered bits decoded correctly; nullopt without decode.
  std::optional<double> decode_accuracy() const;
};

/// Private state of every party, exposed after the session for attack
/// bookkeeping (e.g. "what if Eve also learned the permutation").
struct SessionSecrets {
  std::vector<StateLabel> labels;
  /// Original P-sequence indices that reached Bob, ascending.
  std::vector<std::size_t> survivors;
  /// Compact (survivor) indices in the C-sequence and M-sequence.
  std::vector<std::size_t> check_compact;
  std::vector<std::size_t> message_compact;
  /// Output position k of the returned sequence holds compact photon order[k].
  std::vector<std::size_t> order;
};

}  // namespace qsdc

#endif  // QSDC_SESSION_HPP
