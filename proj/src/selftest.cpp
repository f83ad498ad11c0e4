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

#include "qsdc/selftest.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qsdc/adversary.hpp"
#include "qsdc/stats.hpp"

namespace qsdc {

namespace {

std::string describe(StateLabel label, std::span<const OpLabel> ops) {
  std::string s = to_string(label) + " <-";
  for (OpLabel op : ops) {
    s += ' ';
    s += to_string(op);
  }
  return s;
}

// Gate action on the four labels, written out by hand.
StateLabel expected_action(OpLabel op, StateLabel l) {
  switch (op) {
    case OpLabel::I:
      return l;
    case OpLabel::U:
      return {l.basis, static_cast<Bit>(l.bit ^ 1)};
    case OpLabel::H:
      return {flip_basis(l.basis), l.bit};
  }
  return l;
}

// Overlap 1 within tolerance, and equal amplitudes once the global phase is
// removed.
bool matches(const PhotonState& got, const PhotonState& want) {
  const Complex ip = std::conj(want.alpha) * got.alpha + std::conj(want.beta) * got.beta;
  if (!(std::abs(std::abs(ip) - 1.0) <= kTolerance)) return false;
  const Complex phase = ip / std::abs(ip);
  return std::abs(got.alpha - phase * want.alpha) <= kTolerance &&
         std::abs(got.beta - phase * want.beta) <= kTolerance;
}

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

Matrix2 adjoint(const Matrix2& a) {
  return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

double distance(const Matrix2& a, const Matrix2& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

constexpr Matrix2 kEye = {Complex(1), Complex(0), Complex(0), Complex(1)};
constexpr Matrix2 kMinusEye = {Complex(-1), Complex(0), Complex(0), Complex(-1)};

SelfTestCheck check_fidelity(const GateSet& gates) {
  SelfTestCheck c{"gate action on canonical states", 0, {}};
  for (StateLabel l : kAllLabels) {
    for (OpLabel op : kAllOps) {
      ++c.cases;
      const PhotonState out = apply_op(gates, op, state_from_label(l));
      const PhotonState want = state_from_label(expected_action(op, l));
      if (!matches(out, want)) {
        const OpLabel ops[] = {op};
        c.failures.push_back(describe(l, ops));
      }
    }
  }
  return c;
}

SelfTestCheck check_oracle(const GateSet& gates) {
  SelfTestCheck c{"amplitude vs symbolic, all sequences of length " +
                      std::to_string(kOracleSequenceLength),
                  0, {}};
  std::size_t total = 1;
  for (std::size_t i = 0; i < kOracleSequenceLength; ++i) total *= kAllOps.size();
  std::array<OpLabel, kOracleSequenceLength> ops{};
  for (StateLabel l : kAllLabels) {
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t rest = code;
      for (auto& op : ops) {
        op = kAllOps[rest % kAllOps.size()];
        rest /= kAllOps.size();
      }
      ++c.cases;
      PhotonState s = state_from_label(l);
      StateLabel symbolic = l;
      for (OpLabel op : ops) {
        s = apply_op(gates, op, s);
        symbolic = apply_op_symbolic(op, symbolic);
      }
      const double ov = overlap(s, state_from_label(symbolic));
      if (!matches(s, state_from_label(symbolic)) || !s.is_normalized()) {
        if (c.failures.size() < 16) {
          std::ostringstream msg;
          msg.precision(17);
          msg << describe(l, ops) << ": overlap " << ov;
          c.failures.push_back(msg.str());
        } else if (c.failures.size() == 16) {
          c.failures.push_back("...");
        }
      }
    }
  }
  return c;
}

SelfTestCheck check_composition() {
  SelfTestCheck c{"composed frame effect vs stepwise fold", 0, {}};
  std::array<OpLabel, 4> ops{};
  for (std::size_t code = 0; code < 81; ++code) {
    std::size_t rest = code;
    for (auto& op : ops) {
      op = kAllOps[rest % 3];
      rest /= 3;
    }
    const FrameEffect fx = compose_effects(ops);
    for (StateLabel l : kAllLabels) {
      ++c.cases;
      StateLabel folded = l;
      for (OpLabel op : ops) folded = apply_op_symbolic(op, folded);
      if (!(apply_effect(fx, l) == folded)) c.failures.push_back(describe(l, ops));
    }
  }
  return c;
}

SelfTestCheck check_gate_invariants(const GateSet& gates) {
  SelfTestCheck c{"gate unitarity, HH = I, UU = -I", 0, {}};
  for (OpLabel op : kAllOps) {
    ++c.cases;
    const Matrix2& m = gates.matrix(op);
    if (distance(multiply(adjoint(m), m), kEye) > kTolerance) {
      c.failures.push_back(std::string(to_string(op)) + " is not unitary");
    }
  }
  ++c.cases;
  if (distance(multiply(gates.hadamard, gates.hadamard), kEye) > kTolerance) {
    c.failures.push_back("HH != I");
  }
  ++c.cases;
  if (distance(multiply(gates.flip, gates.flip), kMinusEye) > kTolerance) {
    c.failures.push_back("UU != -I");
  }
  for (StateLabel l : kAllLabels) {
    ++c.cases;
    if (!state_from_label(l).is_normalized()) {
      c.failures.push_back(to_string(l) + " is not normalized");
    }
  }
  return c;
}

SelfTestCheck check_measurement(const GateSet& gates) {
  SelfTestCheck c{"measurement statistics", 0, {}};
  RandomSource rng(0x5E1F7E57);
  for (StateLabel l : kAllLabels) {
    for (Basis b : {Basis::Z, Basis::X}) {
      ++c.cases;
      // Prepare through the gates under test: H maps Z-labels onto X-labels.
      PhotonState s = state_from_label({Basis::Z, l.bit});
      if (l.basis == Basis::X) s = apply_op(gates, OpLabel::H, s);
      constexpr std::size_t kDraws = 20000;
      std::size_t zeros = 0;
      for (std::size_t i = 0; i < kDraws; ++i) zeros += measure(s, b, rng) == 0;
      const double expected = b == l.basis ? (l.bit == 0 ? 1.0 : 0.0) : 0.5;
      if (!within_binomial_band(static_cast<double>(zeros) / kDraws, expected, kDraws, 5.0)) {
        std::ostringstream msg;
        msg << to_string(l) << " in " << to_string(b) << ": " << zeros << "/" << kDraws
            << " zeros, expected p0 = " << expected;
        c.failures.push_back(msg.str());
      }
    }
  }
  return c;
}

SelfTestCheck check_sessions() {
  SelfTestCheck c{"honest noiseless sessions", 0, {}};
  for (std::size_t m : {0, 1, 3}) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      ++c.cases;
      SessionConfig cfg;
      cfg.protocol = m == 0 ? Protocol::Qsdc : Protocol::Mcqsdc;
      cfg.photons = 128;
      cfg.controllers = default_controller_names(m);
      cfg.seed = seed;
      const SessionOutcome out = run_session(cfg, AttackSpec{});
      const bool ok = !out.aborted && out.error_rate == 0.0 && out.message_decoded &&
                      *out.message_decoded == out.message_sent;
      if (!ok) {
        c.failures.push_back(std::string(to_string(cfg.protocol)) + " m=" + std::to_string(m) +
                             " seed=" + std::to_string(seed));
      }
    }
  }
  return c;
}

}  // namespace

bool SelfTestReport::passed() const { return failure_count() == 0; }

std::size_t SelfTestReport::failure_count() const {
  std::size_t n = 0;
  for (const SelfTestCheck& c : checks) n += !c.passed();
  return n;
}

SelfTestReport run_selftest(const GateSet& gates) {
  const auto start = std::chrono::steady_clock::now();
  SelfTestReport report;
  report.checks.push_back(check_fidelity(gates));
  report.checks.push_back(check_oracle(gates));
  report.checks.push_back(check_composition());
  report.checks.push_back(check_gate_invariants(gates));
  report.checks.push_back(check_measurement(gates));
  report.checks.push_back(check_sessions());
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

GateSet perturbed_hadamard(double epsilon) {
  GateSet g = GateSet::canonical();
  const double theta = std::atan(1.0) + epsilon;
  g.hadamard = {Complex(std::cos(theta)), Complex(std::sin(theta)), Complex(std::sin(theta)),
                Complex(-std::cos(theta))};
  return g;
}

}  // namespace qsdc
