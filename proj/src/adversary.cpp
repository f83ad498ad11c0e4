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

#include "qsdc/adversary.hpp"

#include <utility>

namespace qsdc {

namespace {

// Stream index for adversary randomness.
constexpr std::uint64_t kAdversaryStream = 0xEEEE;

}  // namespace

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::InterceptResendAB:
      return "intercept_resend";
    case AttackKind::TapBAGuessMessage:
      return "tap_ba_guess";
    case AttackKind::FakeSequenceBypass:
      return "fake_sequence_bypass";
    case AttackKind::Collusion:
      return "collusion";
    case AttackKind::PassiveNone:
      break;
  }
  return "none";
}

AttackKind parse_attack_kind(std::string_view s) {
  for (AttackKind k : {AttackKind::PassiveNone, AttackKind::InterceptResendAB,
                       AttackKind::TapBAGuessMessage, AttackKind::FakeSequenceBypass,
                       AttackKind::Collusion}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown attack '" + std::string(s) + "'");
}

std::string AttackSpec::name() const {
  std::string n(to_string(kind));
  if (kind == AttackKind::Collusion) {
    n += schedule == ScheduleVariant::FixedOrder ? "_fixed_order" : "_random_order";
  }
  return n;
}

InterceptResendTap::InterceptResendTap(RandomSource rng, BasisPolicy policy)
    : rng_(std::move(rng)), policy_(std::move(policy)) {}

Photon InterceptResendTap::intercept(Photon photon, std::size_t position) {
  const Basis basis = policy_ ? policy_(position, rng_) : (rng_.bit() ? Basis::X : Basis::Z);
  const Bit outcome = photon.measure(basis, rng_);
  if (records_.size() <= position) records_.resize(position + 1);
  records_[position] = Record{basis, outcome};
  return photon;
}

std::shared_ptr<InterceptResendTap> intercept_resend_ab(RandomSource rng) {
  return std::make_shared<InterceptResendTap>(std::move(rng));
}

MessageBits tap_ba_guess_message(
    const std::vector<std::optional<InterceptResendTap::Record>>& records,
    const SessionSecrets& secrets, std::size_t message_length, bool disclose_permutation,
    bool disclose_initial_states) {
  std::vector<std::size_t> target(secrets.order.size());
  for (std::size_t k = 0; k < secrets.order.size(); ++k) target[secrets.order[k]] = k;

  MessageBits guess(message_length, 0);
  for (std::size_t i = 0; i < message_length && i < secrets.message_compact.size(); ++i) {
    const std::size_t compact = secrets.message_compact[i];
    const std::size_t position = disclose_permutation ? target[compact] : i;
    if (position >= records.size() || !records[position]) continue;
    Bit g = records[position]->outcome;
    if (disclose_initial_states) {
      g ^= secrets.labels[secrets.survivors[compact]].bit;
    }
    guess[i] = g;
  }
  return guess;
}

bool ml_flip_parity_guess(const CheckRound& round, std::span<const std::size_t> unknown) {
  // Posterior P(flip) per controller after the H round: 0 if it announced H,
  // otherwise 1/2 (I and U equally likely). Fold into P(odd parity).
  double p_odd = 0.0;
  for (std::size_t k : unknown) {
    const double q = round.announced_h(k).value_or(false) ? 0.0 : 0.5;
    p_odd = p_odd * (1.0 - q) + (1.0 - p_odd) * q;
  }
  return p_odd > 0.5;
}

std::optional<Bit> FakeSequenceBypass::report_check(McReceiver& alice, const CheckRound& round) {
  // The true photon skipped the chain: the initial-basis outcome is initial
  // bit XOR Bob's flip.
  const Bit raw = alice.photon_at(round.position()).measure(round.initial().basis, alice.rng());
  std::vector<std::size_t> everyone(round.controller_count());
  for (std::size_t k = 0; k < everyone.size(); ++k) everyone[k] = k;
  return static_cast<Bit>(raw ^ ml_flip_parity_guess(round, everyone));
}

bool CollusionAttack::announce_h(std::size_t controller, const CheckRound& round,
                                 bool honest_value) {
  (void)round;
  // Zach always claims "no H".
  return controller == zach_ ? false : honest_value;
}

std::optional<Bit> CollusionAttack::report_check(McReceiver& alice, const CheckRound& round) {
  // Alice reports the raw outcome; Zach steers the announced flip parity to even.
  return alice.photon_at(round.position()).measure(round.initial().basis, alice.rng());
}

bool CollusionAttack::announce_flip(std::size_t controller, const CheckRound& round,
                                    bool honest_value) {
  if (controller != zach_) return honest_value;
  bool known = false;
  std::vector<std::size_t> pending;
  for (std::size_t k = 0; k < round.controller_count(); ++k) {
    if (k == zach_) continue;
    if (const auto f = round.announced_flip(k)) {
      known ^= *f;
    } else {
      pending.push_back(k);
    }
  }
  return known ^ ml_flip_parity_guess(round, pending);
}

SessionOutcome run_session(const SessionConfig& config, const AttackSpec& attack) {
  RandomSource adversary(derive_seed(config.seed, kAdversaryStream));
  AttackReport report;
  report.strategy = attack.name();

  auto require_protocol = [&](Protocol p) {
    if (config.protocol != p) {
      throw ConfigError("attack '" + attack.name() + "' needs protocol " +
                        std::string(to_string(p)));
    }
  };

  SessionRun run;
  switch (attack.kind) {
    case AttackKind::PassiveNone:
      run = config.protocol == Protocol::Qsdc ? run_qsdc_session(config)
                                              : run_mcqsdc_session(config);
      break;
    case AttackKind::InterceptResendAB: {
      auto tap = intercept_resend_ab(adversary.split());
      if (config.protocol == Protocol::Qsdc) {
        report.tapped_legs = {"Alice->Bob"};
        run = run_qsdc_session(config, QsdcTaps{tap, nullptr});
      } else {
        report.tapped_legs = {config.controllers.empty() ? "Alice->Bob"
                                                         : "Alice->" + config.controllers[0]};
        McHooks hooks;
        hooks.forward_tap = tap;
        run = run_mcqsdc_session(config, hooks);
      }
      break;
    }
    case AttackKind::TapBAGuessMessage: {
      require_protocol(Protocol::Qsdc);
      auto tap = std::make_shared<InterceptResendTap>(adversary.split());
      report.tapped_legs = {"Bob->Alice"};
      run = run_qsdc_session(config, QsdcTaps{nullptr, tap});
      const MessageBits guess = tap_ba_guess_message(
          tap->records(), run.secrets, run.outcome.message_sent.size(),
          attack.disclose_permutation, attack.disclose_initial_states);
      if (!guess.empty()) {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < guess.size(); ++i) {
          correct += guess[i] == run.outcome.message_sent[i];
        }
        report.message_guess_accuracy =
            static_cast<double>(correct) / static_cast<double>(guess.size());
      }
      break;
    }
    case AttackKind::FakeSequenceBypass: {
      require_protocol(Protocol::Mcqsdc);
      FakeSequenceBypass alice;
      report.corrupted_parties = {"Alice"};
      McHooks hooks;
      hooks.corruption = &alice;
      run = run_mcqsdc_session(config, hooks);
      break;
    }
    case AttackKind::Collusion: {
      require_protocol(Protocol::Mcqsdc);
      if (config.controllers.size() < 2) {
        throw ConfigError("collusion needs at least two controllers");
      }
      CollusionAttack pair(config.controllers.size() - 1);
      report.corrupted_parties = {"Alice", config.controllers.back()};
      McHooks hooks;
      hooks.corruption = &pair;
      hooks.schedule = attack.schedule;
      run = run_mcqsdc_session(config, hooks);
      break;
    }
  }

  SessionOutcome out = std::move(run.outcome);
  report.detected = out.aborted;
  report.check_error_rate = out.error_rate;
  if (attack.kind == AttackKind::FakeSequenceBypass || attack.kind == AttackKind::Collusion) {
    report.message_guess_accuracy = out.decode_accuracy();
  }
  out.attack = std::move(report);
  return out;
}

}  // namespace qsdc
