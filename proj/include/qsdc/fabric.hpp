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

#ifndef QSDC_FABRIC_HPP
#define QSDC_FABRIC_HPP

// Simulated links between parties: lossy, noisy quantum channels with
// adversary taps, an authenticated public broadcast channel, and the session
// transcript that records both.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qsdc/quantum.hpp"
#include "qsdc/random.hpp"

namespace qsdc {

using Json = nlohmann::ordered_json;

enum class NoiseKind : std::uint8_t { None, BitFlip, Depolarizing };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double p = 0.0;

  static NoiseModel none() { return {}; }
  static NoiseModel bit_flip(double p);
  static NoiseModel depolarizing(double p);

  /// BitFlip: Pauli-X with probability p. Depolarizing: with probability p the
  /// photon is replaced by a uniformly random canonical state. Consumes one
  /// Bernoulli draw per call for every kind.
  void apply(Photon& photon, RandomSource& rng) const;
};

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view s);

/// Adversary hook on a quantum channel. The tap receives the photon and must
/// hand back a photon; there is no way to keep a copy.
class Tap {
 public:
  virtual ~Tap() = default;
  virtual Photon intercept(Photon photon, std::size_t position) = 0;
};

/// A photon slot after transmission; nullopt marks a lost photon.
using Slot = std::optional<Photon>;

class QuantumChannel {
 public:
  QuantumChannel(std::string from, std::string to, NoiseModel noise, double loss);

  const std::string& from() const { return from_; }
  const std::string& to() const { return to_; }
  std::string leg() const { return from_ + "->" + to_; }

  void add_tap(std::shared_ptr<Tap> tap);
  std::size_t tap_count() const { return taps_.size(); }

  /// Taps (in registration order), then loss, then noise.
  Slot transmit(Photon photon, std::size_t position, RandomSource& rng);

  /// Transmits every occupied slot; already-lost slots stay lost.
  std::vector<Slot> transmit(std::vector<Slot> photons, RandomSource& rng);

 private:
  std::string from_;
  std::string to_;
  NoiseModel noise_;
  double loss_;
  std::vector<std::shared_ptr<Tap>> taps_;
};

/// Ordered session log, serialized as JSON Lines.
class Transcript {
 public:
  void quantum_send(std::string_view from, std::string_view to, std::size_t count);
  void quantum_deliver(std::string_view from, std::string_view to, const std::vector<Slot>& slots);
  void announcement(std::uint64_t seq, std::string_view sender, std::string_view kind,
                    const Json& payload);
  void measurement(std::string_view party, std::string_view stage, std::size_t count);
  void decision(std::string_view party, bool aborted, double error_rate, std::string_view reason);

  const std::vector<Json>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  std::string to_jsonl() const;

 private:
  Json& push(std::string_view type);
  std::vector<Json> events_;
};

struct Announcement {
  std::uint64_t seq = 0;
  std::string sender;
  std::string kind;
  Json payload;
};

/// Append-only authenticated broadcast. Every party, and the adversary, reads
/// the same log in the same order.
class ClassicalChannel {
 public:
  explicit ClassicalChannel(Transcript& transcript) : transcript_(&transcript) {}

  const Announcement& announce(std::string_view sender, std::string_view kind, Json payload);

  const std::vector<Announcement>& log() const { return log_; }

  /// Most recent announcement of `kind`, if any.
  const Announcement* latest(std::string_view kind) const;

 private:
  Transcript* transcript_;
  std::vector<Announcement> log_;
};

/// Positions (indices into `slots`) that hold a photon.
std::vector<std::size_t> arrived_positions(const std::vector<Slot>& slots);

}  // namespace qsdc

#endif  // QSDC_FABRIC_HPP
