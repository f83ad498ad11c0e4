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

#include <memory>

#include "qsdc/errors.hpp"
#include "qsdc/fabric.hpp"
#include "qsdc/stats.hpp"

namespace qsdc {
namespace {

class RecordingTap : public Tap {
 public:
  explicit RecordingTap(std::vector<int>* log, int id) : log_(log), id_(id) {}
  Photon intercept(Photon photon, std::size_t position) override {
    log_->push_back(id_);
    last_position = position;
    return photon;
  }
  std::size_t last_position = 0;

 private:
  std::vector<int>* log_;
  int id_;
};

class ReplacingTap : public Tap {
 public:
  Photon intercept(Photon, std::size_t) override { return Photon::prepare({Basis::Z, 1}); }
};

TEST(Fabric, IdentityChannelPreservesEveryState) {
  QuantumChannel ch("Alice", "Bob", NoiseModel::none(), 0.0);
  RandomSource rng(1);
  for (StateLabel l : kAllLabels) {
    Slot out = ch.transmit(Photon::prepare(l), 0, rng);
    ASSERT_TRUE(out);
    EXPECT_NEAR(overlap(out->state(), state_from_label(l)), 1.0, 1e-12);
  }
}

TEST(Fabric, FullLossLosesEverything) {
  QuantumChannel ch("Alice", "Bob", NoiseModel::none(), 1.0);
  RandomSource rng(2);
  for (int i = 0; i < 20; ++i) EXPECT_FALSE(ch.transmit(Photon::prepare({Basis::Z, 0}), 0, rng));
}

TEST(Fabric, ForcedBitFlipIsPauliX) {
  QuantumChannel ch("Alice", "Bob", NoiseModel::bit_flip(1.0), 0.0);
  RandomSource rng(3);
  Slot z = ch.transmit(Photon::prepare({Basis::Z, 0}), 0, rng);
  EXPECT_TRUE(same_ray(z->state(), state_from_label({Basis::Z, 1})));
  // X eigenstates are unchanged up to phase.
  Slot x = ch.transmit(Photon::prepare({Basis::X, 1}), 0, rng);
  EXPECT_TRUE(same_ray(x->state(), state_from_label({Basis::X, 1})));
}

TEST(Fabric, BitFlipRateMatchesP) {
  QuantumChannel ch("Alice", "Bob", NoiseModel::bit_flip(0.1), 0.0);
  RandomSource rng(4);
  constexpr int kN = 20000;
  int flips = 0;
  for (int i = 0; i < kN; ++i) {
    Slot s = ch.transmit(Photon::prepare({Basis::Z, 0}), 0, rng);
    flips += same_ray(s->state(), state_from_label({Basis::Z, 1}));
  }
  EXPECT_TRUE(within_binomial_band(static_cast<double>(flips) / kN, 0.1, kN, 4.0));
}

TEST(Fabric, DepolarizingProducesCanonicalStates) {
  QuantumChannel ch("Alice", "Bob", NoiseModel::depolarizing(1.0), 0.0);
  RandomSource rng(5);
  std::array<int, 4> counts{};
  constexpr int kN = 8000;
  for (int i = 0; i < kN; ++i) {
    Slot s = ch.transmit(Photon::prepare({Basis::Z, 0}), 0, rng);
    const auto l = label_of(s->state());
    ASSERT_TRUE(l);
    ++counts[2 * (l->basis == Basis::X) + l->bit];
  }
  for (int c : counts) EXPECT_TRUE(within_binomial_band(c / double(kN), 0.25, kN, 4.0));
}

TEST(Fabric, NoneAndZeroBitFlipConsumeTheSameStream) {
  QuantumChannel a("A", "B", NoiseModel::none(), 0.0);
  QuantumChannel b("A", "B", NoiseModel::bit_flip(0.0), 0.0);
  RandomSource ra(6);
  RandomSource rb(6);
  for (int i = 0; i < 10; ++i) {
    (void)a.transmit(Photon::prepare({Basis::X, 0}), 0, ra);
    (void)b.transmit(Photon::prepare({Basis::X, 0}), 0, rb);
  }
  EXPECT_EQ(ra.next_u64(), rb.next_u64());
}

TEST(Fabric, TapsRunInOrderBeforeLoss) {
  std::vector<int> log;
  QuantumChannel ch("A", "B", NoiseModel::none(), 1.0);
  auto t1 = std::make_shared<RecordingTap>(&log, 1);
  auto t2 = std::make_shared<RecordingTap>(&log, 2);
  ch.add_tap(t1);
  ch.add_tap(t2);
  RandomSource rng(7);
  EXPECT_FALSE(ch.transmit(Photon::prepare({Basis::Z, 0}), 9, rng));
  EXPECT_EQ(log, (std::vector<int>{1, 2}));
  EXPECT_EQ(t2->last_position, 9u);
}

TEST(Fabric, TapReplacementIsWhatArrives) {
  QuantumChannel ch("A", "B", NoiseModel::none(), 0.0);
  ch.add_tap(std::make_shared<ReplacingTap>());
  RandomSource rng(8);
  Slot s = ch.transmit(Photon::prepare({Basis::X, 0}), 0, rng);
  EXPECT_TRUE(same_ray(s->state(), state_from_label({Basis::Z, 1})));
}

TEST(Fabric, SequenceTransmitKeepsLostSlotsLost) {
  QuantumChannel ch("A", "B", NoiseModel::none(), 0.0);
  RandomSource rng(9);
  std::vector<Slot> in;
  in.emplace_back(Photon::prepare({Basis::Z, 0}));
  in.emplace_back(std::nullopt);
  in.emplace_back(Photon::prepare({Basis::Z, 1}));
  const auto out = ch.transmit(std::move(in), rng);
  EXPECT_EQ(arrived_positions(out), (std::vector<std::size_t>{0, 2}));
}

TEST(Fabric, InvalidProbabilitiesRejected) {
  EXPECT_THROW(NoiseModel::bit_flip(1.5), ConfigError);
  EXPECT_THROW(NoiseModel::depolarizing(-0.1), ConfigError);
  EXPECT_THROW(QuantumChannel("A", "B", NoiseModel::none(), 2.0), ConfigError);
  EXPECT_THROW(parse_noise_kind("pink"), ConfigError);
  EXPECT_EQ(parse_noise_kind(to_string(NoiseKind::Depolarizing)), NoiseKind::Depolarizing);
}

TEST(Fabric, ClassicalChannelLogsInOrder) {
  Transcript t;
  ClassicalChannel ch(t);
  ch.announce("Bob", "check_reveal", Json{{"n", 1}});
  ch.announce("Alice", "check_result", Json{{"ok", true}});
  ch.announce("Bob", "check_reveal", Json{{"n", 2}});
  ASSERT_EQ(ch.log().size(), 3u);
  EXPECT_EQ(ch.log()[1].seq, 1u);
  EXPECT_EQ(ch.latest("check_reveal")->payload["n"], 2);
  EXPECT_EQ(ch.latest("nothing"), nullptr);
  EXPECT_EQ(t.size(), 3u);
}

TEST(Fabric, TranscriptIsJsonLines) {
  Transcript t;
  t.quantum_send("Alice", "Bob", 4);
  t.decision("Alice", false, 0.0, "");
  const std::string text = t.to_jsonl();
  std::size_t lines = 0;
  std::size_t start = 0;
  for (std::size_t nl = text.find('\n'); nl != std::string::npos; nl = text.find('\n', start)) {
    const Json j = Json::parse(text.substr(start, nl - start));
    EXPECT_EQ(j["seq"], lines);
    ++lines;
    start = nl + 1;
  }
  EXPECT_EQ(lines, 2u);
  EXPECT_EQ(start, text.size());
}

}  // namespace
}  // namespace qsdc
