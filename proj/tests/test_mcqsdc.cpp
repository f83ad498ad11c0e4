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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracle.hpp"
#include "qsdc/mcqsdc.hpp"
#include "qsdc/stats.hpp"

namespace qsdc {
namespace {

SessionConfig controlled(std::size_t m, std::size_t n, std::uint64_t seed) {
  SessionConfig c;
  c.protocol = Protocol::Mcqsdc;
  c.controllers = default_controller_names(m);
  c.photons = n;
  c.seed = seed;
  return c;
}

std::vector<std::string> announcement_kinds(const Transcript& t) {
  std::vector<std::string> kinds;
  for (const Json& e : t.events()) {
    if (e["event"] == "announcement") kinds.push_back(e["kind"].get<std::string>());
  }
  return kinds;
}

std::size_t first_index(const std::vector<std::string>& v, const std::string& s) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), s) - v.begin());
}

std::size_t last_index(const std::vector<std::string>& v, const std::string& s) {
  return static_cast<std::size_t>(v.rend() - std::find(v.rbegin(), v.rend(), s)) - 1;
}

TEST(McOps, DefaultControllerNamesEndWithZach) {
  EXPECT_EQ(default_controller_names(1), (std::vector<std::string>{"Charlie"}));
  EXPECT_EQ(default_controller_names(3), (std::vector<std::string>{"Charlie", "Dick", "Zach"}));
  EXPECT_TRUE(default_controller_names(0).empty());
}

TEST(McOps, ControllerOpsAreUniformAndDrawnForLostSlots) {
  RandomSource rng(1);
  std::vector<Slot> slots;
  for (int i = 0; i < 9000; ++i) {
    if (i % 3 == 0) {
      slots.emplace_back(std::nullopt);
    } else {
      slots.emplace_back(Photon::prepare({Basis::Z, 0}));
    }
  }
  const ControllerRecord r = controller_pass(slots, rng);
  ASSERT_EQ(r.ops.size(), slots.size());
  std::array<int, 3> counts{};
  for (OpLabel op : r.ops) ++counts[static_cast<int>(op)];
  for (int c : counts) EXPECT_TRUE(within_binomial_band(c / 9000.0, 1.0 / 3, 9000, 4.0));
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) continue;
    const StateLabel want = apply_op_symbolic(r.ops[i], {Basis::Z, 0});
    ASSERT_TRUE(same_ray(slots[i]->state(), state_from_label(want)));
  }
}

TEST(McOps, FixedScheduleIsChainOrder) {
  RandomSource rng(2);
  const auto s = draw_schedule(5, 4, ScheduleVariant::FixedOrder, rng);
  ASSERT_EQ(s.size(), 5u);
  for (const CheckSchedule& c : s) {
    EXPECT_EQ(c.h_order, (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_EQ(c.flip_order, c.h_order);
  }
}

TEST(McOps, RandomScheduleLastSpeakerIsUniform) {
  RandomSource rng(3);
  constexpr std::size_t kChecks = 9000;
  const auto s = draw_schedule(kChecks, 3, ScheduleVariant::RandomOrder, rng);
  std::array<int, 3> last{};
  for (const CheckSchedule& c : s) {
    auto sorted = c.flip_order;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2}));
    ++last[c.flip_order.back()];
  }
  for (int c : last) EXPECT_TRUE(within_binomial_band(c / double(kChecks), 1.0 / 3, kChecks, 4.0));
}

TEST(McOps, ExpectedOutcomeMatchesOracleForAllChains) {
  for (StateLabel l : kAllLabels) {
    for (int code = 0; code < 27; ++code) {
      std::vector<OpLabel> ops;
      oracle::Vec v = oracle::ket(l.basis == Basis::X, l.bit);
      for (int k = 0, r = code; k < 3; ++k, r /= 3) {
        ops.push_back(kAllOps[r % 3]);
        v = oracle::mul(oracle::gate(r % 3), v);
      }
      for (int bob = 0; bob < 2; ++bob) {
        const oracle::Vec w = oracle::mul(oracle::gate(bob), v);
        const auto id = oracle::identify(w);
        const StateLabel got = expected_check_outcome(l, ops, kAllOps[bob]);
        EXPECT_EQ(id[0], got.basis == Basis::X);
        EXPECT_EQ(id[1], got.bit);
      }
    }
  }
}

TEST(McOps, CheckRoundEnforcesTurnOrder) {
  CheckRound r(0, 0, {Basis::Z, 0}, CheckSchedule{{1, 0}, {0, 1}});
  EXPECT_THROW(r.announce_h(0, false), ProtocolError);
  EXPECT_THROW(r.report(0), ProtocolError);
  r.announce_h(1, true);
  EXPECT_THROW(r.report(0), ProtocolError);
  r.announce_h(0, false);
  EXPECT_TRUE(r.h_parity());
  EXPECT_THROW(r.announce_flip(0, true), ProtocolError);
  r.report(1);
  EXPECT_THROW(r.announce_flip(1, false), ProtocolError);
  r.announce_flip(0, true);
  r.announce_flip(1, false);
  EXPECT_TRUE(r.complete());
  EXPECT_EQ(r.announced_ops(), (std::vector<OpLabel>{OpLabel::U, OpLabel::H}));
}

TEST(McOps, HAndFlipFromOneControllerIsInconsistent) {
  CheckRound r(0, 0, {Basis::Z, 0}, CheckSchedule{{0}, {0}});
  r.announce_h(0, true);
  r.report(0);
  r.announce_flip(0, true);
  EXPECT_THROW(r.announced_ops(), ProtocolError);
}

TEST(McSession, HonestNoiselessRunsDecodeForAnyChainLength) {
  for (std::size_t m : {1, 2, 3, 5}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SessionRun run = run_mcqsdc_session(controlled(m, 96, seed));
      ASSERT_FALSE(run.outcome.aborted) << "m=" << m << " seed=" << seed;
      EXPECT_EQ(run.outcome.error_rate, 0.0);
      ASSERT_TRUE(run.outcome.message_decoded);
      EXPECT_EQ(*run.outcome.message_decoded, run.outcome.message_sent);
      EXPECT_FALSE(run.outcome.control_refused);
    }
  }
}

TEST(McSession, ThreeControllers256BitMessage) {
  SessionConfig c = controlled(3, 320, 44);
  c.check_count = 64;
  const SessionRun run = run_mcqsdc_session(c);
  ASSERT_EQ(run.outcome.message_sent.size(), 256u);
  EXPECT_EQ(run.outcome.message_decoded, run.outcome.message_sent);
}

TEST(McSession, ZeroControllersBehavesLikeTwoParty) {
  const SessionRun run = run_mcqsdc_session(controlled(0, 64, 3));
  EXPECT_FALSE(run.outcome.aborted);
  EXPECT_EQ(run.outcome.message_decoded, run.outcome.message_sent);
}

TEST(McSession, AnnouncementOrdering) {
  const SessionRun run = run_mcqsdc_session(controlled(3, 32, 5));
  const auto k = announcement_kinds(run.outcome.transcript);
  EXPECT_LT(first_index(k, "check_reveal"), first_index(k, "initial_states"));
  EXPECT_LT(first_index(k, "initial_states"), first_index(k, "h_schedule"));
  EXPECT_LT(last_index(k, "h_announce"), first_index(k, "check_reports"));
  EXPECT_LT(first_index(k, "check_reports"), first_index(k, "flip_schedule"));
  EXPECT_LT(last_index(k, "flip_announce"), first_index(k, "check_ops"));
  EXPECT_LT(first_index(k, "check_ops"), first_index(k, "check_result"));
  EXPECT_LT(first_index(k, "check_result"), first_index(k, "message_order"));
  EXPECT_LT(first_index(k, "message_order"), first_index(k, "release"));
  EXPECT_EQ(std::count(k.begin(), k.end(), "release"), 3);
}

TEST(McSession, CheckRevealHidesBobOps) {
  const SessionRun run = run_mcqsdc_session(controlled(2, 32, 6));
  for (const Json& e : run.outcome.transcript.events()) {
    if (e["event"] == "announcement" && e["kind"] == "check_reveal") {
      EXPECT_FALSE(e["payload"].contains("ops"));
    }
  }
}

TEST(McSession, WithheldReleaseRefusesReconstruction) {
  for (std::size_t w = 0; w < 3; ++w) {
    SessionConfig c = controlled(3, 2048, 7 + w);
    c.withheld_releases = {w};
    const SessionRun run = run_mcqsdc_session(c);
    EXPECT_FALSE(run.outcome.aborted);
    EXPECT_TRUE(run.outcome.control_refused);
    EXPECT_FALSE(run.outcome.message_decoded);
    ASSERT_TRUE(run.outcome.withheld_guess_accuracy);
    EXPECT_NEAR(*run.outcome.withheld_guess_accuracy, 0.5, 4 * std::sqrt(0.25 / 1536));
  }
}

TEST(McSession, ReconstructWithoutAllReleasesThrows) {
  std::vector<Slot> received;
  RandomSource rng(1);
  const std::vector<StateLabel> labels;
  EXPECT_THROW(release_and_reconstruct(labels, OrderAnnouncement{}, {}, 2, received, rng),
               ControlRefused);
}

TEST(McSession, BitFlipCheckErrorMatchesOracle) {
  for (std::size_t m : {1, 3}) {
    SessionConfig c = controlled(m, 1024, 0);
    const double p = 0.03;
    c.noise = NoiseModel::bit_flip(p);
    c.error_threshold = 1.0;
    std::size_t checked = 0;
    std::size_t bad = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      c.seed = derive_seed(900 + m, s);
      const SessionRun run = run_mcqsdc_session(c);
      checked += run.outcome.checked;
      bad += run.outcome.mismatches;
    }
    const double want = oracle::controlled_bitflip_check_error(p, static_cast<int>(m));
    EXPECT_TRUE(within_binomial_band(static_cast<double>(bad) / checked, want, checked, 3.0))
        << "m=" << m << " observed " << static_cast<double>(bad) / checked << " want " << want;
  }
}

TEST(McSession, LossyHonestRunDecodesDeliveredBits) {
  SessionConfig c = controlled(2, 512, 8);
  c.loss = 0.05;
  const SessionRun run = run_mcqsdc_session(c);
  ASSERT_FALSE(run.outcome.aborted);
  ASSERT_TRUE(run.outcome.message_decoded);
  EXPECT_EQ(run.outcome.decode_accuracy(), 1.0);
  EXPECT_LT(run.outcome.delivered.size(), run.outcome.message_sent.size());
}

TEST(McSession, DeterministicForSeed) {
  const SessionRun a = run_mcqsdc_session(controlled(3, 64, 9));
  const SessionRun b = run_mcqsdc_session(controlled(3, 64, 9));
  EXPECT_EQ(a.outcome.transcript.to_jsonl(), b.outcome.transcript.to_jsonl());
}

}  // namespace
}  // namespace qsdc
