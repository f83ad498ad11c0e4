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

#include "qsdc/mcqsdc.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qsdc {

ControllerRecord controller_pass(std::vector<Slot>& photons, RandomSource& rng) {
  ControllerRecord record;
  record.ops.reserve(photons.size());
  for (Slot& slot : photons) {
    const OpLabel op = kAllOps[rng.below(kAllOps.size())];
    record.ops.push_back(op);
    if (slot) slot->apply(op);
  }
  return record;
}

std::string_view to_string(ScheduleVariant v) {
  return v == ScheduleVariant::FixedOrder ? "fixed" : "random";
}

AnnouncementSchedule draw_schedule(std::size_t checks, std::size_t controllers,
                                   ScheduleVariant variant, RandomSource& rng) {
  AnnouncementSchedule schedule;
  schedule.reserve(checks);
  std::vector<std::size_t> chain(controllers);
  std::iota(chain.begin(), chain.end(), std::size_t{0});
  for (std::size_t i = 0; i < checks; ++i) {
    if (variant == ScheduleVariant::FixedOrder) {
      schedule.push_back({chain, chain});
    } else {
      std::vector<std::size_t> h = rng.permutation(controllers);
      std::vector<std::size_t> f = rng.permutation(controllers);
      schedule.push_back({std::move(h), std::move(f)});
    }
  }
  return schedule;
}

StateLabel expected_check_outcome(StateLabel initial, std::span<const OpLabel> controller_ops,
                                  OpLabel bob_op) {
  StateLabel label = initial;
  for (OpLabel op : controller_ops) {
    label = apply_op_symbolic(op, label);
  }
  return apply_op_symbolic(bob_op, label);
}

// ---------------------------------------------------------------------------
// CheckRound

CheckRound::CheckRound(std::size_t position, std::size_t origin, StateLabel initial,
                       CheckSchedule schedule)
    : position_(position),
      origin_(origin),
      initial_(initial),
      schedule_(std::move(schedule)),
      h_(schedule_.h_order.size()),
      flip_(schedule_.h_order.size()) {
  if (schedule_.flip_order.size() != schedule_.h_order.size()) {
    throw ProtocolError("both announcement rounds must cover every controller");
  }
}

void CheckRound::announce_h(std::size_t controller, bool applied_h) {
  if (h_complete() || schedule_.h_order[h_next_] != controller) {
    throw ProtocolError("controller " + std::to_string(controller) +
                        " announced out of turn in the H round");
  }
  h_[controller] = applied_h;
  ++h_next_;
}

void CheckRound::report(Bit outcome) {
  if (!h_complete()) {
    throw ProtocolError("Alice reported before the H round completed");
  }
  if (report_) {
    throw ProtocolError("Alice reported twice for one check photon");
  }
  report_ = outcome;
}

void CheckRound::announce_flip(std::size_t controller, bool flip) {
  if (!report_) {
    throw ProtocolError("flip round started before Alice reported");
  }
  if (flip_next_ == schedule_.flip_order.size() || schedule_.flip_order[flip_next_] != controller) {
    throw ProtocolError("controller " + std::to_string(controller) +
                        " announced out of turn in the flip round");
  }
  flip_[controller] = flip;
  ++flip_next_;
}

bool CheckRound::h_parity() const {
  if (!h_complete()) {
    throw ProtocolError("H parity requested before the H round completed");
  }
  bool parity = false;
  for (const auto& h : h_) parity ^= *h;
  return parity;
}

Bit CheckRound::reported_outcome() const {
  if (!report_) throw ProtocolError("no report yet");
  return *report_;
}

std::vector<OpLabel> CheckRound::announced_ops() const {
  if (!complete()) {
    throw ProtocolError("announcements incomplete");
  }
  std::vector<OpLabel> ops;
  ops.reserve(h_.size());
  for (std::size_t k = 0; k < h_.size(); ++k) {
    if (*h_[k] && *flip_[k]) {
      throw ProtocolError("controller " + std::to_string(k) + " announced both H and a flip");
    }
    ops.push_back(*h_[k] ? OpLabel::H : (*flip_[k] ? OpLabel::U : OpLabel::I));
  }
  return ops;
}

// ---------------------------------------------------------------------------
// Reconstruction

FrameEffect released_frame(std::span<const ControlRelease> releases, std::size_t origin) {
  FrameEffect frame;
  for (const ControlRelease& r : releases) {
    frame ^= effect_of(r.record.ops.at(origin));
  }
  return frame;
}

namespace {

Photon& slot_at(std::vector<Slot>& received, std::size_t position) {
  if (position >= received.size() || !received[position]) {
    throw ProtocolError("announcement references unknown position " + std::to_string(position));
  }
  return *received[position];
}

MessageBits decode_with_frames(std::span<const StateLabel> labels, const OrderAnnouncement& order,
                               std::span<const ControlRelease> releases,
                               std::vector<Slot>& received, RandomSource& rng) {
  MessageBits bits;
  bits.reserve(order.entries.size());
  for (const OrderEntry& e : order.entries) {
    if (e.origin >= labels.size()) {
      throw ProtocolError("order announcement references unknown position " +
                          std::to_string(e.origin));
    }
    const StateLabel initial = labels[e.origin];
    const FrameEffect frame = released_frame(releases, e.origin);
    const Bit outcome = slot_at(received, e.position).measure(basis_xor(initial.basis, frame.swap), rng);
    bits.push_back(outcome ^ initial.bit ^ (frame.flip ? 1 : 0));
  }
  return bits;
}

}  // namespace

MessageBits release_and_reconstruct(std::span<const StateLabel> alice_labels,
                                    const OrderAnnouncement& order,
                                    std::span<const ControlRelease> releases,
                                    std::size_t controller_count, std::vector<Slot>& received,
                                    RandomSource& rng) {
  std::vector<bool> seen(controller_count, false);
  for (const ControlRelease& r : releases) {
    if (r.controller >= controller_count || seen[r.controller]) {
      throw ProtocolError("release from unknown or duplicate controller");
    }
    seen[r.controller] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ControlRefused("reconstruction refused: a controller has not released its record");
  }
  return decode_with_frames(alice_labels, order, releases, received, rng);
}

MessageBits best_guess_without_release(std::span<const StateLabel> alice_labels,
                                        const OrderAnnouncement& order,
                                        std::span<const ControlRelease> releases,
                                        std::vector<Slot>& received, RandomSource& rng) {
  return decode_with_frames(alice_labels, order, releases, received, rng);
}

// ---------------------------------------------------------------------------
// McReceiver

void McReceiver::require(Stage s, const char* what) const {
  if (stage_ != s) {
    throw ProtocolError(std::string("Alice: ") + what + " called out of protocol order");
  }
}

std::vector<Slot> McReceiver::prepare(std::size_t n) {
  require(Stage::Idle, "prepare");
  PSequence seq = prepare_p_sequence(n, rng_);
  labels_ = std::move(seq.labels);
  std::vector<Slot> out;
  out.reserve(n);
  for (Photon& p : seq.photons) out.emplace_back(std::move(p));
  stage_ = Stage::Prepared;
  return out;
}

std::vector<Slot> McReceiver::prepare_decoy(std::size_t n) {
  PSequence seq = prepare_p_sequence(n, rng_);
  decoy_labels_ = std::move(seq.labels);
  std::vector<Slot> out;
  out.reserve(n);
  for (Photon& p : seq.photons) out.emplace_back(std::move(p));
  return out;
}

std::vector<std::size_t> McReceiver::receive(std::vector<Slot> returned) {
  require(Stage::Prepared, "receive");
  received_ = std::move(returned);
  stage_ = Stage::Received;
  return arrived_positions(received_);
}

Photon& McReceiver::photon_at(std::size_t position) { return slot_at(received_, position); }

Bit McReceiver::report_check(const CheckRound& round) {
  require(Stage::Received, "report_check");
  if (!round.h_complete()) {
    throw ProtocolError("Alice reported before the H round completed");
  }
  const Basis basis = basis_xor(labels_.at(round.origin()).basis, round.h_parity());
  return photon_at(round.position()).measure(basis, rng_);
}

void McReceiver::conclude_check(bool passed) {
  require(Stage::Received, "conclude_check");
  stage_ = passed ? Stage::Passed : Stage::Aborted;
}

MessageBits McReceiver::reconstruct(const OrderAnnouncement& order,
                                    std::span<const ControlRelease> releases,
                                    std::size_t controller_count) {
  require(Stage::Passed, "reconstruct");
  MessageBits bits =
      release_and_reconstruct(labels_, order, releases, controller_count, received_, rng_);
  stage_ = Stage::Done;
  return bits;
}

MessageBits McReceiver::guess_without_release(const OrderAnnouncement& order,
                                              std::span<const ControlRelease> releases) {
  require(Stage::Passed, "guess_without_release");
  MessageBits bits = best_guess_without_release(labels_, order, releases, received_, rng_);
  stage_ = Stage::Done;
  return bits;
}

MessageBits McReceiver::decode_direct(const OrderAnnouncement& order) {
  require(Stage::Passed, "decode_direct");
  std::vector<Bit> outcomes;
  outcomes.reserve(order.entries.size());
  for (const OrderEntry& e : order.entries) {
    outcomes.push_back(photon_at(e.position).measure(labels_.at(e.origin).basis, rng_));
  }
  stage_ = Stage::Done;
  return reveal_order_and_decode(labels_, order, outcomes);
}

// ---------------------------------------------------------------------------
// Session

namespace {

struct Hop {
  const SessionConfig& config;
  Transcript& log;
  ClassicalChannel& pub;
  RandomSource& line;

  std::vector<Slot> operator()(std::vector<Slot> slots, const std::string& from,
                               const std::string& to, bool receipt,
                               const std::shared_ptr<Tap>& tap = nullptr) const {
    QuantumChannel channel(from, to, config.noise, config.loss);
    if (tap) channel.add_tap(tap);
    log.quantum_send(from, to, slots.size());
    std::vector<Slot> out = channel.transmit(std::move(slots), line);
    log.quantum_deliver(from, to, out);
    if (receipt) {
      pub.announce(to, "receipt", Json{{"positions", arrived_positions(out)}});
    }
    return out;
  }
};

std::string ops_string(const ControllerRecord& r) {
  std::string s;
  s.reserve(r.ops.size());
  for (OpLabel op : r.ops) s += to_string(op);
  return s;
}

Json orders_json(const AnnouncementSchedule& schedule, bool h_round) {
  Json orders = Json::array();
  for (const CheckSchedule& s : schedule) {
    orders.push_back(h_round ? s.h_order : s.flip_order);
  }
  return orders;
}

}  // namespace

SessionRun run_mcqsdc_session(const SessionConfig& config, const McHooks& hooks) {
  config.validate();
  if (config.protocol != Protocol::Mcqsdc) {
    throw ConfigError("run_mcqsdc_session needs protocol mcqsdc");
  }
  const std::vector<std::string>& names = config.controllers;
  const std::size_t m = names.size();
  McCorruption honest;
  McCorruption& party = hooks.corruption ? *hooks.corruption : honest;
  const Route route = party.route();
  if (route == Route::ToLastController && m < 2) {
    throw ConfigError("routing to the last controller needs at least two controllers");
  }

  RandomSource root(config.seed);
  McReceiver alice(root.split());
  Sender bob(root.split());
  RandomSource line = root.split();
  RandomSource bob_schedule = root.split();
  std::vector<RandomSource> controller_rng;
  controller_rng.reserve(m);
  for (std::size_t k = 0; k < m; ++k) controller_rng.push_back(root.split());

  SessionRun run;
  SessionOutcome& out = run.outcome;
  Transcript& log = out.transcript;
  ClassicalChannel pub(log);
  const Hop hop{config, log, pub, line};
  const std::string a(kAlice);
  const std::string b(kBob);

  // Distribution through the chain.
  std::vector<ControllerRecord> records(m);
  std::vector<Slot> p_sequence = alice.prepare(config.photons);
  std::vector<Slot> at_bob;
  if (route == Route::Honest) {
    std::vector<Slot> slots = std::move(p_sequence);
    std::string prev = a;
    for (std::size_t k = 0; k < m; ++k) {
      slots = hop(std::move(slots), prev, names[k], true, k == 0 ? hooks.forward_tap : nullptr);
      records[k] = controller_pass(slots, controller_rng[k]);
      prev = names[k];
    }
    at_bob = hop(std::move(slots), prev, b, false, m == 0 ? hooks.forward_tap : nullptr);
  } else {
    // The decoys run through the honest part of the chain and are swallowed
    // by Alice at its end.
    const std::size_t honest_count = route == Route::BypassChain ? m : m - 1;
    std::vector<Slot> decoys = alice.prepare_decoy(config.photons);
    std::string prev = a;
    for (std::size_t k = 0; k < honest_count; ++k) {
      decoys = hop(std::move(decoys), prev, names[k], true);
      records[k] = controller_pass(decoys, controller_rng[k]);
      prev = names[k];
    }
    if (honest_count > 0) {
      hop(std::move(decoys), prev, a, false);
    }
    if (route == Route::BypassChain) {
      at_bob = hop(std::move(p_sequence), a, b, false, hooks.forward_tap);
    } else {
      const std::string& zach = names[m - 1];
      std::vector<Slot> at_zach = hop(std::move(p_sequence), a, zach, true, hooks.forward_tap);
      records[m - 1].ops.assign(config.photons, OpLabel::I);
      at_bob = hop(std::move(at_zach), zach, b, false);
    }
  }

  // Bob receives, encodes and returns a rearranged sequence.
  const std::vector<std::size_t> survivors = bob.receive(std::move(at_bob));
  pub.announce(b, "receipt", Json{{"positions", survivors}});

  auto finish = [&] {
    run.secrets.labels = alice.labels();
    run.secrets.survivors = bob.survivors();
    run.secrets.check_compact = bob.check_set().positions;
    run.secrets.message_compact = message_positions(bob.survivors().size(), bob.check_set());
    run.secrets.order = bob.permutation().order();
  };

  if (!bob.encode(config.check_size(survivors.size()), config.message)) {
    out.aborted = true;
    out.abort_reason = "too few photons survived the channel";
    log.decision(b, true, 0.0, out.abort_reason);
    finish();
    return run;
  }
  std::vector<Slot> at_alice = hop(bob.rearrange_and_send(), b, a, false);
  const std::vector<std::size_t> alice_has = alice.receive(std::move(at_alice));

  // Check disclosure, two announcement rounds per check photon.
  pub.announce(a, "receipt", Json{{"positions", alice_has}});
  const CheckAnnouncement checks = bob.announce_checks(alice_has);
  {
    Json reveal = to_json(checks);
    reveal.erase("ops");  // Bob's check ops follow only after Alice reports.
    pub.announce(b, "check_reveal", std::move(reveal));
  }
  out.message_sent = bob.message();
  out.delivered = bob.delivered_bits();
  if (checks.entries.empty()) {
    out.aborted = true;
    out.abort_reason = "no check photons arrived";
    bob.confirm_check(false);
    alice.conclude_check(false);
    log.decision(b, true, 0.0, out.abort_reason);
    finish();
    return run;
  }

  {
    Json states = Json::array();
    for (const CheckEntry& e : checks.entries) states.push_back(to_string(alice.labels()[e.origin]));
    pub.announce(a, "initial_states", Json{{"states", std::move(states)}});
  }

  const AnnouncementSchedule schedule =
      draw_schedule(checks.entries.size(), m, hooks.schedule, bob_schedule);
  std::vector<CheckRound> rounds;
  rounds.reserve(checks.entries.size());
  for (std::size_t i = 0; i < checks.entries.size(); ++i) {
    const CheckEntry& e = checks.entries[i];
    rounds.emplace_back(e.position, e.origin, alice.labels()[e.origin], schedule[i]);
  }

  pub.announce(b, "h_schedule", Json{{"orders", orders_json(schedule, true)}});
  for (CheckRound& round : rounds) {
    for (std::size_t k : round.schedule().h_order) {
      const bool honest_value = records[k].ops[round.origin()] == OpLabel::H;
      const bool value = party.announce_h(k, round, honest_value);
      round.announce_h(k, value);
      pub.announce(names[k], "h_announce", Json{{"position", round.position()}, {"h", value}});
    }
  }

  {
    Json reports = Json::array();
    for (CheckRound& round : rounds) {
      const std::optional<Bit> forged = party.report_check(alice, round);
      const Bit outcome = forged ? *forged : alice.report_check(round);
      round.report(outcome);
      reports.push_back(outcome);
    }
    log.measurement(a, "check", rounds.size());
    pub.announce(a, "check_reports", Json{{"outcomes", std::move(reports)}});
  }

  pub.announce(b, "flip_schedule", Json{{"orders", orders_json(schedule, false)}});
  for (CheckRound& round : rounds) {
    for (std::size_t k : round.schedule().flip_order) {
      const bool honest_value = records[k].ops[round.origin()] == OpLabel::U;
      const bool value = party.announce_flip(k, round, honest_value);
      round.announce_flip(k, value);
      pub.announce(names[k], "flip_announce",
                   Json{{"position", round.position()}, {"flip", value}});
    }
  }

  {
    std::string ops;
    for (const CheckEntry& e : checks.entries) ops += to_string(e.op);
    pub.announce(b, "check_ops", Json{{"ops", std::move(ops)}});
  }

  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const StateLabel expected = expected_check_outcome(
        rounds[i].initial(), rounds[i].announced_ops(), checks.entries[i].op);
    mismatches += rounds[i].reported_outcome() != expected.bit;
  }
  out.checked = rounds.size();
  out.mismatches = mismatches;
  out.error_rate = static_cast<double>(mismatches) / static_cast<double>(rounds.size());
  const bool abort = out.error_rate > config.error_threshold;
  out.aborted = abort;
  if (abort) out.abort_reason = "error rate above threshold";
  pub.announce(b, "check_result", Json{{"error_rate", out.error_rate}, {"abort", abort}});
  log.decision(b, abort, out.error_rate, out.abort_reason);
  bob.confirm_check(!abort);
  alice.conclude_check(!abort);

  // Order disclosure, releases, reconstruction.
  if (!abort) {
    const OrderAnnouncement order = bob.announce_order();
    pub.announce(b, "message_order", to_json(order));
    std::vector<ControlRelease> releases;
    for (std::size_t k = 0; k < m; ++k) {
      const bool withheld = std::find(config.withheld_releases.begin(),
                                      config.withheld_releases.end(),
                                      k) != config.withheld_releases.end();
      if (withheld) {
        pub.announce(names[k], "release_withheld", Json::object());
      } else {
        pub.announce(names[k], "release", Json{{"ops", ops_string(records[k])}});
        releases.push_back({k, records[k]});
      }
    }
    if (party.decodes_directly()) {
      out.message_decoded = alice.decode_direct(order);
    } else if (releases.size() == m) {
      out.message_decoded = alice.reconstruct(order, releases, m);
    } else {
      out.control_refused = true;
      const MessageBits guess = alice.guess_without_release(order, releases);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < guess.size(); ++i) {
        correct += guess[i] == out.message_sent.at(order.entries[i].bit_index);
      }
      if (!guess.empty()) {
        out.withheld_guess_accuracy =
            static_cast<double>(correct) / static_cast<double>(guess.size());
      }
    }
    log.measurement(a, "message", order.entries.size());
  }
  finish();
  return run;
}

}  // namespace qsdc
