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

#ifndef QSDC_ADVERSARY_HPP
#define QSDC_ADVERSARY_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsdc/fabric.hpp"
#include "qsdc/mcqsdc.hpp"
#include "qsdc/qsdc.hpp"
#include "qsdc/session.hpp"

namespace qsdc {

enum class AttackKind : std::uint8_t {
  PassiveNone,
  InterceptResendAB,
  TapBAGuessMessage,
  FakeSequenceBypass,
  Collusion,
};

struct AttackSpec {
  AttackKind kind = AttackKind::PassiveNone;
  /// Collusion only: Bob's announcement schedule.
  ScheduleVariant schedule = ScheduleVariant::RandomOrder;
  /// TapBAGuessMessage only: secrets handed to Eve after the fact, to
  /// measure what each one is worth.
  bool disclose_permutation = false;
  bool disclose_initial_states = false;

  std::string name() const;
};

std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view s);

/// Chooses Eve's measurement basis for the photon at `position`.
using BasisPolicy = std::function<Basis(std::size_t position, RandomSource& rng)>;

/// Measures each photon in a basis picked by the policy (uniform by default)
/// and forwards the collapsed photon, i.e. resends the observed eigenstate.
class InterceptResendTap : public Tap {
 public:
  struct Record {
    Basis basis = Basis::Z;
    Bit outcome = 0;
  };

  explicit InterceptResendTap(RandomSource rng, BasisPolicy policy = {});

  Photon intercept(Photon photon, std::size_t position) override;

  /// Indexed by channel position; empty for positions never seen.
  const std::vector<std::optional<Record>>& records() const { return records_; }

 private:
  RandomSource rng_;
  BasisPolicy policy_;
  std::vector<std::optional<Record>> records_;
};

/// Eve on the Alice -> Bob leg.
std::shared_ptr<InterceptResendTap> intercept_resend_ab(RandomSource rng);

/// Eve's per-bit guess of Bob's message from her measurements of the
/// returned sequence. Without the permutation she pairs message bit i with
/// returned position i; without the initial states she takes her outcome as
/// the bit itself.
MessageBits tap_ba_guess_message(const std::vector<std::optional<InterceptResendTap::Record>>& records,
                                 const SessionSecrets& secrets, std::size_t message_length,
                                 bool disclose_permutation, bool disclose_initial_states);

/// Maximum-likelihood guess of the net flip parity of the controllers in
/// `unknown` given the completed H round: those that announced H
/// contribute 0, each of the others is I or U with equal posterior weight.
/// Ties go to even parity.
bool ml_flip_parity_guess(const CheckRound& round, std::span<const std::size_t> unknown);

/// Dishonest Alice sends the true sequence straight to Bob and decoys down
/// the controller chain. She measures each check photon in its initial basis
/// and adds her best guess of the controllers' flip parity.
class FakeSequenceBypass : public McCorruption {
 public:
  Route route() const override { return Route::BypassChain; }
  std::optional<Bit> report_check(McReceiver& alice, const CheckRound& round) override;
  bool decodes_directly() const override { return true; }
};

/// Alice and the last controller (Zach) collude. The true sequence goes to
/// Zach, who forwards it untouched; decoys go through the others. Alice
/// reports as if the announced flips will cancel, and Zach picks his flip
/// announcement to make them cancel, from the honest flips announced before
/// him and an ML guess for those still to come.
class CollusionAttack : public McCorruption {
 public:
  explicit CollusionAttack(std::size_t last_controller) : zach_(last_controller) {}

  Route route() const override { return Route::ToLastController; }
  bool announce_h(std::size_t controller, const CheckRound& round, bool honest_value) override;
  bool announce_flip(std::size_t controller, const CheckRound& round, bool honest_value) override;
  std::optional<Bit> report_check(McReceiver& alice, const CheckRound& round) override;
  bool decodes_directly() const override { return true; }

 private:
  std::size_t zach_;
};

/// One full session under `attack`. The attack report is filled in.
SessionOutcome run_session(const SessionConfig& config, const AttackSpec& attack = {});

}  // namespace qsdc

#endif  // QSDC_ADVERSARY_HPP
