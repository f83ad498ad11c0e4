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

#include "qsdc/qsdc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsdc {

PSequence prepare_p_sequence(std::size_t n, RandomSource& rng) {
  if (n == 0) {
    throw ConfigError("a P-sequence needs at least one photon");
  }
  PSequence seq;
  seq.labels.reserve(n);
  seq.photons.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const StateLabel label = kAllLabels[rng.below(kAllLabels.size())];
    seq.labels.push_back(label);
    seq.photons.push_back(Photon::prepare(label));
  }
  return seq;
}

bool CheckSet::contains(std::size_t i) const {
  return std::binary_search(positions.begin(), positions.end(), i);
}

CheckSet select_check_set(std::size_t n, double fraction, RandomSource& rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("check fraction must lie in (0, 1)");
  }
  const auto count = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
  return select_check_set_of_size(n, count, rng);
}

CheckSet select_check_set_of_size(std::size_t n, std::size_t count, RandomSource& rng) {
  if (count == 0) {
    throw ConfigError("check set would be empty");
  }
  if (count > n) {
    throw ConfigError("check set larger than the sequence");
  }
  return CheckSet{rng.sample(n, count)};
}

std::vector<std::size_t> message_positions(std::size_t n, const CheckSet& check) {
  std::vector<std::size_t> out;
  out.reserve(n - std::min(n, check.size()));
  auto it = check.positions.begin();
  for (std::size_t i = 0; i < n; ++i) {
    if (it != check.positions.end() && *it == i) {
      ++it;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

Permutation::Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
  inverse_.assign(order_.size(), order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) {
    const std::size_t src = order_[k];
    if (src >= order_.size() || inverse_[src] != order_.size()) {
      throw ProtocolError("permutation is not a bijection");
    }
    inverse_[src] = k;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return Permutation(std::move(order));
}

Permutation Permutation::random(std::size_t n, RandomSource& rng) {
  return Permutation(rng.permutation(n));
}

Encoding encode(std::span<Photon> photons, const CheckSet& check, const MessageBits& msg,
                RandomSource& rng) {
  const std::size_t n = photons.size();
  if (!check.positions.empty() && check.positions.back() >= n) {
    throw ProtocolError("check position outside the sequence");
  }
  if (msg.size() + check.size() != n) {
    throw ProtocolError("message length " + std::to_string(msg.size()) +
                        " does not match the " + std::to_string(n - check.size()) +
                        " message photons");
  }
  Encoding enc;
  enc.ops.reserve(n);
  std::size_t next_bit = 0;
  auto check_it = check.positions.begin();
  for (std::size_t i = 0; i < n; ++i) {
    OpLabel op;
    if (check_it != check.positions.end() && *check_it == i) {
      ++check_it;
      op = rng.bit() ? OpLabel::U : OpLabel::I;
      enc.check_ops.emplace(i, op);
    } else {
      op = msg[next_bit++] ? OpLabel::U : OpLabel::I;
    }
    photons[i].apply(op);
    enc.ops.push_back(op);
  }
  return enc;
}

CheckResult run_check(std::span<const StateLabel> alice_labels,
                      const CheckAnnouncement& announced, std::span<const Bit> measurements) {
  if (measurements.size() != announced.entries.size()) {
    throw ProtocolError("one measurement per announced check photon is required");
  }
  CheckResult r;
  for (std::size_t i = 0; i < announced.entries.size(); ++i) {
    const CheckEntry& e = announced.entries[i];
    if (e.origin >= alice_labels.size()) {
      throw ProtocolError("check announcement references unknown position " +
                          std::to_string(e.origin));
    }
    if (e.op == OpLabel::H) {
      throw ProtocolError("check operation outside {I, U}");
    }
    const Bit expected = alice_labels[e.origin].bit ^ (e.op == OpLabel::U ? 1 : 0);
    r.mismatches += measurements[i] != expected;
  }
  r.checked = announced.entries.size();
  r.error_rate = r.checked == 0 ? 0.0
                                : static_cast<double>(r.mismatches) / static_cast<double>(r.checked);
  return r;
}

MessageBits reveal_order_and_decode(std::span<const StateLabel> alice_labels,
                                    const OrderAnnouncement& order,
                                    std::span<const Bit> measurements) {
  if (measurements.size() != order.entries.size()) {
    throw ProtocolError("one measurement per message photon is required");
  }
  MessageBits bits;
  bits.reserve(order.entries.size());
  for (std::size_t i = 0; i < order.entries.size(); ++i) {
    const OrderEntry& e = order.entries[i];
    if (e.origin >= alice_labels.size()) {
      throw ProtocolError("order announcement references unknown position " +
                          std::to_string(e.origin));
    }
    bits.push_back(measurements[i] ^ alice_labels[e.origin].bit);
  }
  return bits;
}

Json to_json(const CheckAnnouncement& a) {
  Json positions = Json::array();
  Json origins = Json::array();
  std::string ops;
  for (const CheckEntry& e : a.entries) {
    positions.push_back(e.position);
    origins.push_back(e.origin);
    ops += to_string(e.op);
  }
  return Json{{"positions", std::move(positions)}, {"origins", std::move(origins)},
              {"ops", std::move(ops)}};
}

Json to_json(const OrderAnnouncement& a) {
  Json bits = Json::array();
  Json positions = Json::array();
  Json origins = Json::array();
  for (const OrderEntry& e : a.entries) {
    bits.push_back(e.bit_index);
    positions.push_back(e.position);
    origins.push_back(e.origin);
  }
  return Json{{"message_length", a.message_length},
              {"bits", std::move(bits)},
              {"positions", std::move(positions)},
              {"origins", std::move(origins)}};
}

// ---------------------------------------------------------------------------
// Receiver

void Receiver::require(Stage s, const char* what) const {
  if (stage_ != s) {
    throw ProtocolError(std::string("Alice: ") + what + " called out of protocol order");
  }
}

Photon& Receiver::photon_at(std::size_t position) {
  if (position >= received_.size() || !received_[position]) {
    throw ProtocolError("announcement references unknown position " + std::to_string(position));
  }
  return *received_[position];
}

std::vector<Slot> Receiver::prepare(std::size_t n) {
  require(Stage::Idle, "prepare");
  PSequence seq = prepare_p_sequence(n, rng_);
  labels_ = std::move(seq.labels);
  std::vector<Slot> out;
  out.reserve(n);
  for (Photon& p : seq.photons) out.emplace_back(std::move(p));
  stage_ = Stage::Prepared;
  return out;
}

std::vector<std::size_t> Receiver::receive(std::vector<Slot> returned) {
  require(Stage::Prepared, "receive");
  received_ = std::move(returned);
  stage_ = Stage::Received;
  return arrived_positions(received_);
}

CheckResult Receiver::check(const CheckAnnouncement& announced, double threshold) {
  require(Stage::Received, "check");
  std::vector<Bit> outcomes;
  outcomes.reserve(announced.entries.size());
  for (const CheckEntry& e : announced.entries) {
    if (e.origin >= labels_.size()) {
      throw ProtocolError("check announcement references unknown position " +
                          std::to_string(e.origin));
    }
    outcomes.push_back(photon_at(e.position).measure(labels_[e.origin].basis, rng_));
  }
  CheckResult r = run_check(labels_, announced, outcomes);
  stage_ = r.error_rate > threshold ? Stage::Aborted : Stage::Passed;
  return r;
}

MessageBits Receiver::decode(const OrderAnnouncement& order) {
  require(Stage::Passed, "decode");
  std::vector<Bit> outcomes;
  outcomes.reserve(order.entries.size());
  for (const OrderEntry& e : order.entries) {
    if (e.origin >= labels_.size()) {
      throw ProtocolError("order announcement references unknown position " +
                          std::to_string(e.origin));
    }
    outcomes.push_back(photon_at(e.position).measure(labels_[e.origin].basis, rng_));
  }
  stage_ = Stage::Done;
  return reveal_order_and_decode(labels_, order, outcomes);
}

// ---------------------------------------------------------------------------
// Sender

void Sender::require(Stage s, const char* what) const {
  if (stage_ != s) {
    throw ProtocolError(std::string("Bob: ") + what + " called out of protocol order");
  }
}

std::vector<std::size_t> Sender::receive(std::vector<Slot> photons) {
  require(Stage::Idle, "receive");
  for (std::size_t i = 0; i < photons.size(); ++i) {
    if (photons[i]) {
      survivors_.push_back(i);
      photons_.push_back(std::move(*photons[i]));
    }
  }
  stage_ = Stage::Received;
  return survivors_;
}

bool Sender::encode(std::size_t check_count, const std::optional<MessageBits>& message) {
  require(Stage::Received, "encode");
  const std::size_t n = photons_.size();
  if (check_count == 0 || check_count >= n) {
    return false;
  }
  check_ = select_check_set_of_size(n, check_count, rng_);
  message_positions_ = message_positions(n, check_);
  if (message) {
    message_ = *message;
  } else {
    message_.resize(message_positions_.size());
    for (Bit& b : message_) b = rng_.bit();
  }
  encoding_ = qsdc::encode(photons_, check_, message_, rng_);
  stage_ = Stage::Encoded;
  return true;
}

std::vector<Slot> Sender::rearrange_and_send() {
  require(Stage::Encoded, "rearrange");
  auto [shuffled, perm] = rearrange(std::move(photons_), rng_);
  perm_ = std::move(perm);
  photons_.clear();
  std::vector<Slot> out;
  out.reserve(shuffled.size());
  for (Photon& p : shuffled) out.emplace_back(std::move(p));
  stage_ = Stage::Sent;
  return out;
}

CheckAnnouncement Sender::announce_checks(const std::vector<std::size_t>& alice_arrived) {
  require(Stage::Sent, "announce_checks");
  alice_has_.assign(perm_.size(), false);
  for (std::size_t p : alice_arrived) {
    if (p >= perm_.size()) {
      throw ProtocolError("receipt references unknown position " + std::to_string(p));
    }
    alice_has_[p] = true;
  }
  CheckAnnouncement a;
  for (std::size_t c : check_.positions) {
    const std::size_t pos = perm_.target(c);
    if (alice_has_[pos]) {
      a.entries.push_back({pos, survivors_[c], encoding_.ops[c]});
    }
  }
  std::sort(a.entries.begin(), a.entries.end(),
            [](const CheckEntry& x, const CheckEntry& y) { return x.position < y.position; });
  stage_ = Stage::ChecksAnnounced;
  return a;
}

void Sender::confirm_check(bool passed) {
  require(Stage::ChecksAnnounced, "confirm_check");
  stage_ = passed ? Stage::Passed : Stage::Failed;
}

OrderAnnouncement Sender::announce_order() {
  require(Stage::Passed, "announce_order");
  OrderAnnouncement a;
  a.message_length = message_.size();
  for (std::size_t i = 0; i < message_positions_.size(); ++i) {
    const std::size_t c = message_positions_[i];
    const std::size_t pos = perm_.target(c);
    if (alice_has_[pos]) {
      a.entries.push_back({i, pos, survivors_[c]});
    }
  }
  return a;
}

std::vector<std::size_t> Sender::delivered_bits() const {
  std::vector<std::size_t> out;
  if (alice_has_.empty()) return out;
  for (std::size_t i = 0; i < message_positions_.size(); ++i) {
    if (alice_has_[perm_.target(message_positions_[i])]) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Json positions_json(const std::vector<std::size_t>& v) { return Json{{"positions", v}}; }

void finish_secrets(SessionRun& run, const Receiver& alice, const Sender& bob) {
  run.secrets.labels = alice.labels();
  run.secrets.survivors = bob.survivors();
  run.secrets.check_compact = bob.check_set().positions;
  run.secrets.message_compact = message_positions(bob.survivors().size(), bob.check_set());
  run.secrets.order = bob.permutation().order();
}

}  // namespace

SessionRun run_qsdc_session(const SessionConfig& config, const QsdcTaps& taps) {
  config.validate();
  if (config.protocol != Protocol::Qsdc) {
    throw ConfigError("run_qsdc_session needs protocol qsdc");
  }
  RandomSource root(config.seed);
  Receiver alice(root.split());
  Sender bob(root.split());
  RandomSource line = root.split();

  SessionRun run;
  SessionOutcome& out = run.outcome;
  Transcript& log = out.transcript;
  ClassicalChannel pub(log);
  QuantumChannel forward(std::string(kAlice), std::string(kBob), config.noise, config.loss);
  QuantumChannel backward(std::string(kBob), std::string(kAlice), config.noise, config.loss);
  if (taps.forward) forward.add_tap(taps.forward);
  if (taps.backward) backward.add_tap(taps.backward);

  // Alice prepares and sends.
  std::vector<Slot> p_sequence = alice.prepare(config.photons);
  log.quantum_send(kAlice, kBob, p_sequence.size());
  std::vector<Slot> at_bob = forward.transmit(std::move(p_sequence), line);
  log.quantum_deliver(kAlice, kBob, at_bob);
  const std::vector<std::size_t> survivors = bob.receive(std::move(at_bob));
  pub.announce(kBob, "receipt", positions_json(survivors));

  // Bob selects check photons and encodes.
  if (!bob.encode(config.check_size(survivors.size()), config.message)) {
    out.aborted = true;
    out.abort_reason = "too few photons survived the channel";
    log.decision(kBob, true, 0.0, out.abort_reason);
    finish_secrets(run, alice, bob);
    return run;
  }

  // Bob rearranges and returns the sequence.
  std::vector<Slot> p_prime = bob.rearrange_and_send();
  log.quantum_send(kBob, kAlice, p_prime.size());
  std::vector<Slot> at_alice = backward.transmit(std::move(p_prime), line);
  log.quantum_deliver(kBob, kAlice, at_alice);
  const std::vector<std::size_t> alice_has = alice.receive(std::move(at_alice));

  // Receipt and check disclosure.
  pub.announce(kAlice, "receipt", positions_json(alice_has));
  const CheckAnnouncement checks = bob.announce_checks(alice_has);
  pub.announce(kBob, "check_reveal", to_json(checks));

  out.message_sent = bob.message();
  out.delivered = bob.delivered_bits();
  if (checks.entries.empty()) {
    out.aborted = true;
    out.abort_reason = "no check photons arrived";
    bob.confirm_check(false);
    log.decision(kAlice, true, 0.0, out.abort_reason);
    finish_secrets(run, alice, bob);
    return run;
  }

  // Check evaluation.
  const CheckResult result = alice.check(checks, config.error_threshold);
  log.measurement(kAlice, "check", result.checked);
  const bool abort = alice.aborted();
  pub.announce(kAlice, "check_result", Json{{"error_rate", result.error_rate}, {"abort", abort}});
  log.decision(kAlice, abort, result.error_rate, abort ? "error rate above threshold" : "");
  bob.confirm_check(!abort);
  out.aborted = abort;
  if (abort) out.abort_reason = "error rate above threshold";
  out.error_rate = result.error_rate;
  out.checked = result.checked;
  out.mismatches = result.mismatches;

  // Order disclosure and decoding.
  if (!abort) {
    const OrderAnnouncement order = bob.announce_order();
    pub.announce(kBob, "message_order", to_json(order));
    out.message_decoded = alice.decode(order);
    log.measurement(kAlice, "message", order.entries.size());
  }
  finish_secrets(run, alice, bob);
  return run;
}

}  // namespace qsdc
