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

#ifndef QSDC_MCQSDC_HPP
#define QSDC_MCQSDC_HPP

// Controlled variant: photons pass a chain of controllers, each applying a
// random I, U or H, before reaching Bob. The eavesdropping check discloses
// controller operations in two randomly ordered rounds per check photon:
// first only "applied H or not", then (after Alice reports her outcome) the
// flip bit. Alice decodes only once every controller releases its record.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qsdc/errors.hpp"
#include "qsdc/fabric.hpp"
#include "qsdc/qsdc.hpp"
#include "qsdc/quantum.hpp"
#include "qsdc/random.hpp"
#include "qsdc/session.hpp"

namespace qsdc {

/// One controller's private ops, indexed by P-sequence position.
struct ControllerRecord {
  std::vector<OpLabel> ops;
};

/// Uniform op from {I, U, H} per slot, lost slots included.
ControllerRecord controller_pass(std::vector<Slot>& photons, RandomSource& rng);

enum class ScheduleVariant : std::uint8_t {
  RandomOrder,
  /// Chain order in both rounds; the last controller always speaks last.
  /// Insecure negative control.
  FixedOrder,
};

std::string_view to_string(ScheduleVariant v);

/// Speaking orders (controller chain indices) for one check photon.
struct CheckSchedule {
  std::vector<std::size_t> h_order;
  std::vector<std::size_t> flip_order;
};

using AnnouncementSchedule = std::vector<CheckSchedule>;

/// Fresh orderings per check photon, independent between the two rounds.
AnnouncementSchedule draw_schedule(std::size_t checks, std::size_t controllers,
                                   ScheduleVariant variant, RandomSource& rng);

/// Label Alice should observe: `initial` pushed through the controller chain
/// then Bob's op.
StateLabel expected_check_outcome(StateLabel initial, std::span<const OpLabel> controller_ops,
                                  OpLabel bob_op);

/// Announcement sequencer for one check photon. Enforces the speaking order
/// of both rounds and that Alice reports between them.
class CheckRound {
 public:
  CheckRound(std::size_t position, std::size_t origin, StateLabel initial, CheckSchedule schedule);

  std::size_t position() const { return position_; }
  std::size_t origin() const { return origin_; }
  StateLabel initial() const { return initial_; }
  const CheckSchedule& schedule() const { return schedule_; }
  std::size_t controller_count() const { return schedule_.h_order.size(); }

  void announce_h(std::size_t controller, bool applied_h);
  void report(Bit outcome);
  void announce_flip(std::size_t controller, bool flip);

  bool h_complete() const { return h_next_ == schedule_.h_order.size(); }
  bool reported() const { return report_.has_value(); }
  bool complete() const { return reported() && flip_next_ == schedule_.flip_order.size(); }

  /// Number of flip announcements made so far.
  std::size_t flips_announced() const { return flip_next_; }

  /// Parity of announced H operations; valid once the H round is complete.
  bool h_parity() const;

  std::optional<bool> announced_h(std::size_t controller) const { return h_.at(controller); }
  std::optional<bool> announced_flip(std::size_t controller) const { return flip_.at(controller); }
  Bit reported_outcome() const;

  /// Ops implied by both rounds, in chain order. Announcing H and a flip for
  /// the same controller is inconsistent and throws ProtocolError.
  std::vector<OpLabel> announced_ops() const;

 private:
  std::size_t position_;
  std::size_t origin_;
  StateLabel initial_;
  CheckSchedule schedule_;
  std::size_t h_next_ = 0;
  std::size_t flip_next_ = 0;
  std::vector<std::optional<bool>> h_;
  std::vector<std::optional<bool>> flip_;
  std::optional<Bit> report_;
};

/// A controller handing its record to Alice.
struct ControlRelease {
  std::size_t controller = 0;
  ControllerRecord record;
};

/// Reconstruction attempted without every controller's release.
class ControlRefused : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

/// Composed frame of the released records at P-sequence position `origin`.
FrameEffect released_frame(std::span<const ControlRelease> releases, std::size_t origin);

/// Alice measures each message photon in initial basis XOR swap parity and
/// decodes bit = outcome XOR initial bit XOR flip parity. Throws
/// ControlRefused unless all `controller_count` releases are present.
MessageBits release_and_reconstruct(std::span<const StateLabel> alice_labels,
                                    const OrderAnnouncement& order,
                                    std::span<const ControlRelease> releases,
                                    std::size_t controller_count, std::vector<Slot>& received,
                                    RandomSource& rng);

/// Alice's guess with some releases missing, treating each missing record
/// as I.
MessageBits best_guess_without_release(std::span<const StateLabel> alice_labels,
                                        const OrderAnnouncement& order,
                                        std::span<const ControlRelease> releases,
                                        std::vector<Slot>& received, RandomSource& rng);

/// Alice in the controlled protocol.
class McReceiver {
 public:
  explicit McReceiver(RandomSource rng) : rng_(std::move(rng)) {}

  std::vector<Slot> prepare(std::size_t n);
  /// Extra photons with a private label record, for routing attacks.
  std::vector<Slot> prepare_decoy(std::size_t n);

  std::vector<std::size_t> receive(std::vector<Slot> returned);

  /// Honest check measurement: basis = initial basis XOR announced H parity.
  Bit report_check(const CheckRound& round);

  void conclude_check(bool passed);

  MessageBits reconstruct(const OrderAnnouncement& order, std::span<const ControlRelease> releases,
                          std::size_t controller_count);
  MessageBits guess_without_release(const OrderAnnouncement& order,
                                    std::span<const ControlRelease> releases);
  /// Measure in the initial basis, ignoring controllers. Only meaningful when
  /// the photons never passed through the chain.
  MessageBits decode_direct(const OrderAnnouncement& order);

  Photon& photon_at(std::size_t position);
  const std::vector<StateLabel>& labels() const { return labels_; }
  const std::vector<StateLabel>& decoy_labels() const { return decoy_labels_; }
  RandomSource& rng() { return rng_; }

 private:
  enum class Stage { Idle, Prepared, Received, Passed, Aborted, Done };
  void require(Stage s, const char* what) const;

  RandomSource rng_;
  Stage stage_ = Stage::Idle;
  std::vector<StateLabel> labels_;
  std::vector<StateLabel> decoy_labels_;
  std::vector<Slot> received_;
};

/// How the true P-sequence travels.
enum class Route : std::uint8_t {
  Honest,         // Alice -> controllers -> Bob
  BypassChain,    // Alice -> Bob; decoys through the whole chain
  ToLastController,  // Alice -> last controller -> Bob; decoys through the rest
};

/// Dishonest-party behaviour plugged into the controlled session. The
/// defaults are the honest behaviour.
class McCorruption {
 public:
  virtual ~McCorruption() = default;

  virtual Route route() const { return Route::Honest; }

  /// Value announced by `controller` in the H round.
  virtual bool announce_h(std::size_t controller, const CheckRound& round, bool honest_value) {
    (void)controller, (void)round;
    return honest_value;
  }
  /// Value announced by `controller` in the flip round.
  virtual bool announce_flip(std::size_t controller, const CheckRound& round, bool honest_value) {
    (void)controller, (void)round;
    return honest_value;
  }
  /// Alice's check report; nullopt means the honest measurement.
  virtual std::optional<Bit> report_check(McReceiver& alice, const CheckRound& round) {
    (void)alice, (void)round;
    return std::nullopt;
  }
  /// Alice decodes from the photons directly instead of using releases.
  virtual bool decodes_directly() const { return false; }
};

struct McHooks {
  McCorruption* corruption = nullptr;
  /// Tap on Alice's outgoing leg.
  std::shared_ptr<Tap> forward_tap;
  ScheduleVariant schedule = ScheduleVariant::RandomOrder;
};

SessionRun run_mcqsdc_session(const SessionConfig& config, const McHooks& hooks = {});

}  // namespace qsdc

#endif  // QSDC_MCQSDC_HPP
