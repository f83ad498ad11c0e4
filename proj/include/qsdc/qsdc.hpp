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

#ifndef QSDC_QSDC_HPP
#define QSDC_QSDC_HPP

// Two-party direct communication by order rearrangement of single photons.
//
// Alice (receiver) prepares random conjugate-basis photons and sends them to
// Bob (sender). Bob encodes bits with I/U, samples a check subset, permutes
// the sequence and returns it. Order information is disclosed in two stages:
// the check photons' positions after Alice confirms receipt, the message
// photons' positions only after the check passes.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsdc/errors.hpp"
#include "qsdc/fabric.hpp"
#include "qsdc/quantum.hpp"
#include "qsdc/random.hpp"
#include "qsdc/session.hpp"

namespace qsdc {

inline constexpr std::string_view kAlice = "Alice";
inline constexpr std::string_view kBob = "Bob";

struct PSequence {
  std::vector<StateLabel> labels;
  std::vector<Photon> photons;

  std::size_t size() const { return labels.size(); }
};

/// Uniform draws from the four-state alphabet. n == 0 is a ConfigError.
PSequence prepare_p_sequence(std::size_t n, RandomSource& rng);

/// Sorted positions of the C-sequence.
struct CheckSet {
  std::vector<std::size_t> positions;

  std::size_t size() const { return positions.size(); }
  bool contains(std::size_t i) const;
};

/// round(fraction * n) uniformly chosen positions. Requires 0 < fraction < 1
/// and a nonempty result.
CheckSet select_check_set(std::size_t n, double fraction, RandomSource& rng);
CheckSet select_check_set_of_size(std::size_t n, std::size_t count, RandomSource& rng);

/// Complement of `check` in [0, n), ascending: where message bits go.
std::vector<std::size_t> message_positions(std::size_t n, const CheckSet& check);

/// Bijection on [0, n). Output position k takes input element source(k).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> order);

  static Permutation identity(std::size_t n);
  static Permutation random(std::size_t n, RandomSource& rng);

  std::size_t size() const { return order_.size(); }
  std::size_t source(std::size_t out) const { return order_.at(out); }
  std::size_t target(std::size_t in) const { return inverse_.at(in); }
  const std::vector<std::size_t>& order() const { return order_; }
  Permutation inverse() const { return Permutation(inverse_); }

  template <class T>
  std::vector<T> apply(std::vector<T> in) const {
    if (in.size() != order_.size()) {
      throw ProtocolError("permutation size does not match sequence length");
    }
    std::vector<T> out;
    out.reserve(in.size());
    for (std::size_t k = 0; k < order_.size(); ++k) {
      out.push_back(std::move(in[order_[k]]));
    }
    return out;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.order_ == b.order_;
  }

 private:
  std::vector<std::size_t> order_;
  std::vector<std::size_t> inverse_;
};

template <class T>
std::pair<std::vector<T>, Permutation> rearrange(std::vector<T> seq, RandomSource& rng) {
  Permutation perm = Permutation::random(seq.size(), rng);
  std::vector<T> out = perm.apply(std::move(seq));
  return {std::move(out), std::move(perm)};
}

struct Encoding {
  /// One op per photon in sequence order.
  std::vector<OpLabel> ops;
  /// Bob's private record of the random ops on the C-sequence.
  std::map<std::size_t, OpLabel> check_ops;
};

/// Chooses Bob's ops (uniform I/U on check positions, 0 -> I and 1 -> U on
/// message positions in ascending order) and applies them to `photons`.
Encoding encode(std::span<Photon> photons, const CheckSet& check, const MessageBits& msg,
                RandomSource& rng);

/// Check photon as Bob discloses it after Alice confirms receipt.
struct CheckEntry {
  std::size_t position = 0;  // index in the returned sequence
  std::size_t origin = 0;    // index in Alice's P-sequence
  OpLabel op = OpLabel::I;
};

struct CheckAnnouncement {
  std::vector<CheckEntry> entries;
};

struct CheckResult {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  double error_rate = 0.0;
};

/// Compares Alice's check measurements (aligned with the announcement
/// entries, each taken in the basis of the photon's initial label) against
/// initial bit XOR [op == U].
CheckResult run_check(std::span<const StateLabel> alice_labels,
                      const CheckAnnouncement& announced, std::span<const Bit> measurements);

/// Message photon as Bob discloses it after the check passes.
struct OrderEntry {
  std::size_t bit_index = 0;
  std::size_t position = 0;
  std::size_t origin = 0;
};

struct OrderAnnouncement {
  std::size_t message_length = 0;
  std::vector<OrderEntry> entries;
};

/// bit = measured XOR initial bit, for measurements aligned with `order`.
MessageBits reveal_order_and_decode(std::span<const StateLabel> alice_labels,
                                    const OrderAnnouncement& order,
                                    std::span<const Bit> measurements);

Json to_json(const CheckAnnouncement& a);
Json to_json(const OrderAnnouncement& a);

/// Alice's side of the two-party protocol. Methods must be called in
/// protocol order; anything else throws ProtocolError.
class Receiver {
 public:
  explicit Receiver(RandomSource rng) : rng_(std::move(rng)) {}

  /// Prepare the P-sequence and hand over the photons for sending.
  std::vector<Slot> prepare(std::size_t n);

  /// The returned sequence arrives. Returns the arrived positions.
  std::vector<std::size_t> receive(std::vector<Slot> returned);

  /// Measure the announced check photons and evaluate the error rate.
  /// Aborts (and refuses to decode later) iff error_rate > threshold.
  CheckResult check(const CheckAnnouncement& announced, double threshold);

  /// Measure and decode the message photons.
  MessageBits decode(const OrderAnnouncement& order);

  const std::vector<StateLabel>& labels() const { return labels_; }
  bool aborted() const { return stage_ == Stage::Aborted; }

 private:
  enum class Stage { Idle, Prepared, Received, Passed, Aborted, Done };

  void require(Stage s, const char* what) const;
  Photon& photon_at(std::size_t position);

  RandomSource rng_;
  Stage stage_ = Stage::Idle;
  std::vector<StateLabel> labels_;
  std::vector<Slot> received_;
};

/// Bob's side. Works on the compacted list of photons that reached him.
class Sender {
 public:
  explicit Sender(RandomSource rng) : rng_(std::move(rng)) {}

  /// Keeps the photons that arrived; returns their original positions.
  std::vector<std::size_t> receive(std::vector<Slot> photons);

  /// Choose the C-sequence and encode. `message` absent means a random
  /// message of the right length. Returns false if too few photons survived.
  bool encode(std::size_t check_count, const std::optional<MessageBits>& message);

  /// Permute and release the sequence for sending.
  std::vector<Slot> rearrange_and_send();

  /// After Alice's receipt (positions she holds), disclose the check photons.
  CheckAnnouncement announce_checks(const std::vector<std::size_t>& alice_arrived);

  /// Disclose the message photons. Only after the check passed.
  OrderAnnouncement announce_order();

  void confirm_check(bool passed);

  const MessageBits& message() const { return message_; }
  const std::vector<std::size_t>& survivors() const { return survivors_; }
  const CheckSet& check_set() const { return check_; }
  const Encoding& encoding() const { return encoding_; }
  const Permutation& permutation() const { return perm_; }
  std::vector<std::size_t> delivered_bits() const;

 private:
  enum class Stage { Idle, Received, Encoded, Sent, ChecksAnnounced, Passed, Failed };

  void require(Stage s, const char* what) const;

  RandomSource rng_;
  Stage stage_ = Stage::Idle;
  std::vector<std::size_t> survivors_;
  std::vector<Photon> photons_;
  CheckSet check_;
  std::vector<std::size_t> message_positions_;
  MessageBits message_;
  Encoding encoding_;
  Permutation perm_;
  std::vector<bool> alice_has_;
};

/// Adversary taps on the two quantum legs.
struct QsdcTaps {
  std::shared_ptr<Tap> forward;   // Alice -> Bob
  std::shared_ptr<Tap> backward;  // Bob -> Alice
};

struct SessionRun {
  SessionOutcome outcome;
  SessionSecrets secrets;
};

/// One complete two-party session over the simulated fabric.
SessionRun run_qsdc_session(const SessionConfig& config, const QsdcTaps& taps = {});

}  // namespace qsdc

#endif  // QSDC_QSDC_HPP
