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
#include <set>

#include "oracle.hpp"
#include "qsdc/errors.hpp"
#include "qsdc/qsdc.hpp"
#include "qsdc/stats.hpp"

namespace qsdc {
namespace {

SessionConfig two_party(std::size_t n, std::uint64_t seed) {
  SessionConfig c;
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

TEST(QsdcOps, PSequenceIsUniformOverFourStates) {
  RandomSource rng(1);
  const PSequence p = prepare_p_sequence(8000, rng);
  ASSERT_EQ(p.photons.size(), 8000u);
  std::array<int, 4> counts{};
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++counts[2 * (p.labels[i].basis == Basis::X) + p.labels[i].bit];
    ASSERT_TRUE(same_ray(p.photons[i].state(), state_from_label(p.labels[i])));
  }
  for (int c : counts) EXPECT_TRUE(within_binomial_band(c / 8000.0, 0.25, 8000, 4.0));
  EXPECT_THROW(prepare_p_sequence(0, rng), ConfigError);
}

TEST(QsdcOps, CheckSetSizeAndComplement) {
  RandomSource rng(2);
  const CheckSet c = select_check_set(100, 0.25, rng);
  EXPECT_EQ(c.size(), 25u);
  EXPECT_TRUE(std::is_sorted(c.positions.begin(), c.positions.end()));
  const auto m = message_positions(100, c);
  EXPECT_EQ(m.size(), 75u);
  for (std::size_t i : m) EXPECT_FALSE(c.contains(i));
  EXPECT_THROW(select_check_set(100, 0.0, rng), ConfigError);
  EXPECT_THROW(select_check_set(100, 1.0, rng), ConfigError);
}

TEST(QsdcOps, PermutationInverseRoundTrip) {
  RandomSource rng(3);
  const Permutation p = Permutation::random(50, rng);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i * 7;
  const auto shuffled = p.apply(v);
  for (std::size_t k = 0; k < 50; ++k) {
    EXPECT_EQ(shuffled[k], v[p.source(k)]);
    EXPECT_EQ(p.target(p.source(k)), k);
  }
  EXPECT_EQ(p.inverse().apply(shuffled), v);
  EXPECT_THROW(p.apply(std::vector<int>(3)), ProtocolError);
}

TEST(QsdcOps, EncodeAppliesUForOneBits) {
  RandomSource rng(4);
  PSequence p = prepare_p_sequence(10, rng);
  CheckSet check{{1, 4}};
  const MessageBits msg = {1, 0, 1, 1, 0, 0, 1, 0};
  const Encoding e = encode(p.photons, check, msg, rng);
  const auto mpos = message_positions(10, check);
  for (std::size_t i = 0; i < mpos.size(); ++i) {
    EXPECT_EQ(e.ops[mpos[i]], msg[i] ? OpLabel::U : OpLabel::I);
    const StateLabel want = apply_op_symbolic(e.ops[mpos[i]], p.labels[mpos[i]]);
    EXPECT_TRUE(same_ray(p.photons[mpos[i]].state(), state_from_label(want)));
  }
  EXPECT_EQ(e.check_ops.size(), 2u);
  for (const auto& [pos, op] : e.check_ops) EXPECT_NE(op, OpLabel::H);
  EXPECT_THROW(encode(p.photons, check, MessageBits(3), rng), ProtocolError);
}

TEST(QsdcOps, RunCheckCountsMismatches) {
  const std::vector<StateLabel> labels = {{Basis::Z, 0}, {Basis::X, 1}, {Basis::Z, 1}};
  CheckAnnouncement a{{{0, 0, OpLabel::U}, {1, 1, OpLabel::I}, {2, 2, OpLabel::U}}};
  const std::vector<Bit> meas = {1, 1, 1};
  const CheckResult r = run_check(labels, a, meas);
  EXPECT_EQ(r.checked, 3u);
  EXPECT_EQ(r.mismatches, 1u);
  EXPECT_DOUBLE_EQ(r.error_rate, 1.0 / 3);
  CheckAnnouncement bad{{{0, 7, OpLabel::I}}};
  EXPECT_THROW(run_check(labels, bad, std::vector<Bit>{0}), ProtocolError);
}

TEST(QsdcOps, DecodeIsMeasurementXorInitialBit) {
  const std::vector<StateLabel> labels = {{Basis::Z, 1}, {Basis::X, 0}};
  OrderAnnouncement o{2, {{0, 1, 1}, {1, 0, 0}}};
  const MessageBits bits = reveal_order_and_decode(labels, o, std::vector<Bit>{1, 0});
  EXPECT_EQ(bits, (MessageBits{1, 1}));
}

TEST(QsdcSession, NoiselessHonestRunRoundTrips) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SessionRun run = run_qsdc_session(two_party(64, seed));
    EXPECT_FALSE(run.outcome.aborted);
    EXPECT_EQ(run.outcome.error_rate, 0.0);
    EXPECT_EQ(run.outcome.checked, 16u);
    ASSERT_TRUE(run.outcome.message_decoded);
    EXPECT_EQ(*run.outcome.message_decoded, run.outcome.message_sent);
  }
}

TEST(QsdcSession, EveryShortMessageRoundTripsExhaustively) {
  std::size_t sessions = 0;
  for (std::size_t k = 1; k <= 8; ++k) {
    for (std::uint32_t code = 0; code < (1u << k); ++code) {
      SessionConfig c = two_party(k + 2, code * 31 + k);
      c.check_count = 2;
      MessageBits msg(k);
      for (std::size_t i = 0; i < k; ++i) msg[i] = (code >> i) & 1;
      c.message = msg;
      const SessionRun run = run_qsdc_session(c);
      ASSERT_FALSE(run.outcome.aborted);
      ASSERT_EQ(run.outcome.message_decoded, msg);
      ++sessions;
    }
  }
  EXPECT_EQ(sessions, 510u);
}

TEST(QsdcSession, AnnouncementOrder) {
  const SessionRun run = run_qsdc_session(two_party(32, 5));
  EXPECT_EQ(announcement_kinds(run.outcome.transcript),
            (std::vector<std::string>{"receipt", "receipt", "check_reveal", "check_result",
                                      "message_order"}));
}

TEST(QsdcSession, BitFlipCheckErrorMatchesOracle) {
  for (double p : {0.02, 0.05, 0.2}) {
    SessionConfig c = two_party(1024, 77);
    c.noise = NoiseModel::bit_flip(p);
    c.error_threshold = 1.0;
    std::size_t checked = 0;
    std::size_t bad = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      c.seed = derive_seed(77, s);
      const SessionRun run = run_qsdc_session(c);
      checked += run.outcome.checked;
      bad += run.outcome.mismatches;
    }
    const double want = oracle::two_party_bitflip_check_error(p);
    EXPECT_TRUE(within_binomial_band(static_cast<double>(bad) / checked, want, checked, 3.0))
        << "p=" << p << " observed " << static_cast<double>(bad) / checked << " want " << want;
  }
}

TEST(QsdcSession, ThresholdDecidesAbort) {
  SessionConfig c = two_party(256, 9);
  c.noise = NoiseModel::bit_flip(0.3);
  c.error_threshold = 0.05;
  const SessionRun run = run_qsdc_session(c);
  EXPECT_TRUE(run.outcome.aborted);
  EXPECT_EQ(run.outcome.abort_reason, "error rate above threshold");
  EXPECT_FALSE(run.outcome.message_decoded);
  EXPECT_FALSE(announcement_kinds(run.outcome.transcript).back() == "message_order");
}

TEST(QsdcSession, LossDropsBitsButDeliveredOnesDecode) {
  SessionConfig c = two_party(512, 10);
  c.loss = 0.2;
  const SessionRun run = run_qsdc_session(c);
  ASSERT_FALSE(run.outcome.aborted);
  ASSERT_TRUE(run.outcome.message_decoded);
  EXPECT_LT(run.outcome.delivered.size(), run.outcome.message_sent.size());
  EXPECT_EQ(run.outcome.message_decoded->size(), run.outcome.delivered.size());
  for (std::size_t i = 0; i < run.outcome.delivered.size(); ++i) {
    EXPECT_EQ((*run.outcome.message_decoded)[i],
              run.outcome.message_sent[run.outcome.delivered[i]]);
  }
  EXPECT_EQ(run.outcome.decode_accuracy(), 1.0);
}

TEST(QsdcSession, TotalLossAborts) {
  SessionConfig c = two_party(16, 11);
  c.loss = 1.0;
  const SessionRun run = run_qsdc_session(c);
  EXPECT_TRUE(run.outcome.aborted);
}

TEST(QsdcSession, DeterministicForSeed) {
  const SessionRun a = run_qsdc_session(two_party(128, 12));
  const SessionRun b = run_qsdc_session(two_party(128, 12));
  EXPECT_EQ(a.outcome.transcript.to_jsonl(), b.outcome.transcript.to_jsonl());
  const SessionRun c = run_qsdc_session(two_party(128, 13));
  EXPECT_NE(a.outcome.transcript.to_jsonl(), c.outcome.transcript.to_jsonl());
}

TEST(QsdcParties, OutOfOrderCallsThrow) {
  Receiver alice(RandomSource(1));
  EXPECT_THROW(alice.decode(OrderAnnouncement{}), ProtocolError);
  EXPECT_THROW(alice.check(CheckAnnouncement{}, 0.0), ProtocolError);
  Sender bob(RandomSource(2));
  EXPECT_THROW(bob.rearrange_and_send(), ProtocolError);
  EXPECT_THROW(bob.announce_order(), ProtocolError);
}

TEST(QsdcParties, DecodeBeforePassingCheckThrows) {
  Receiver alice(RandomSource(1));
  Sender bob(RandomSource(2));
  auto sent = alice.prepare(8);
  bob.receive(std::move(sent));
  ASSERT_TRUE(bob.encode(2, std::nullopt));
  alice.receive(bob.rearrange_and_send());
  EXPECT_THROW(alice.decode(OrderAnnouncement{}), ProtocolError);
}

TEST(QsdcConfig, ValidationRejectsBadValues) {
  SessionConfig c;
  c.check_fraction = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SessionConfig{};
  c.message = MessageBits(3);
  EXPECT_THROW(c.validate(), ConfigError);
  c = SessionConfig{};
  c.controllers = {"Charlie"};
  EXPECT_THROW(c.validate(), ConfigError);
  c = SessionConfig{};
  c.loss = 0.1;
  c.message = MessageBits(48);
  EXPECT_THROW(c.validate(), ConfigError);
  c = SessionConfig{};
  c.photons = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace qsdc
