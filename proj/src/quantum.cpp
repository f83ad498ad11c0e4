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

#include "qsdc/quantum.hpp"

#include <cmath>

#include "qsdc/errors.hpp"

namespace qsdc {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PhotonState eigenstate(Basis basis, Bit bit) {
  if (basis == Basis::Z) {
    return bit == 0 ? PhotonState{1.0, 0.0} : PhotonState{0.0, 1.0};
  }
  return bit == 0 ? PhotonState{kInvSqrt2, kInvSqrt2} : PhotonState{kInvSqrt2, -kInvSqrt2};
}

}  // namespace

bool PhotonState::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) < tol;
}

double overlap(const PhotonState& a, const PhotonState& b) {
  return std::abs(std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta);
}

bool same_ray(const PhotonState& a, const PhotonState& b, double tol) {
  return std::abs(overlap(a, b) - 1.0) < tol;
}

FrameEffect effect_of(OpLabel op) {
  switch (op) {
    case OpLabel::I:
      return {false, false};
    case OpLabel::U:
      return {true, false};
    case OpLabel::H:
      return {false, true};
  }
  return {};
}

StateLabel apply_effect(const FrameEffect& effect, StateLabel label) {
  return {basis_xor(label.basis, effect.swap), static_cast<Bit>(label.bit ^ effect.flip)};
}

const GateSet& GateSet::canonical() {
  static const GateSet gates{
      Matrix2{1.0, 0.0, 0.0, 1.0},
      Matrix2{0.0, 1.0, -1.0, 0.0},
      Matrix2{kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2},
  };
  return gates;
}

const Matrix2& GateSet::matrix(OpLabel op) const {
  switch (op) {
    case OpLabel::U:
      return flip;
    case OpLabel::H:
      return hadamard;
    case OpLabel::I:
      break;
  }
  return identity;
}

PhotonState apply_matrix(const Matrix2& m, const PhotonState& s) {
  return {m[0] * s.alpha + m[1] * s.beta, m[2] * s.alpha + m[3] * s.beta};
}

PhotonState state_from_label(StateLabel label) { return eigenstate(label.basis, label.bit); }

std::optional<StateLabel> label_of(const PhotonState& s, double tol) {
  for (const StateLabel& l : kAllLabels) {
    if (same_ray(state_from_label(l), s, tol)) {
      return l;
    }
  }
  return std::nullopt;
}

PhotonState apply_op(OpLabel op, const PhotonState& state) {
  return apply_op(GateSet::canonical(), op, state);
}

PhotonState apply_op(const GateSet& gates, OpLabel op, const PhotonState& state) {
  return apply_matrix(gates.matrix(op), state);
}

StateLabel apply_op_symbolic(OpLabel op, StateLabel label) {
  switch (op) {
    case OpLabel::U:
      return {label.basis, static_cast<Bit>(label.bit ^ 1)};
    case OpLabel::H:
      return {flip_basis(label.basis), label.bit};
    case OpLabel::I:
      break;
  }
  return label;
}

FrameEffect compose_effects(std::span<const OpLabel> ops) {
  FrameEffect total;
  for (OpLabel op : ops) {
    total ^= effect_of(op);
  }
  return total;
}

double probability_zero(const PhotonState& state, Basis basis) {
  const PhotonState e0 = eigenstate(basis, 0);
  const Complex amp = std::conj(e0.alpha) * state.alpha + std::conj(e0.beta) * state.beta;
  return std::norm(amp) / state.norm_squared();
}

Bit measure(const PhotonState& state, Basis basis, RandomSource& rng) {
  double p0 = probability_zero(state, basis);
  // Snap eigenstate probabilities to exactly 0 or 1.
  if (p0 > 1.0 - kTolerance) {
    p0 = 1.0;
  } else if (p0 < kTolerance) {
    p0 = 0.0;
  }
  return rng.uniform01() < p0 ? 0 : 1;
}

Bit Photon::measure(Basis basis, RandomSource& rng) {
  const Bit outcome = qsdc::measure(state_, basis, rng);
  state_ = eigenstate(basis, outcome);
  return outcome;
}

std::string_view to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

std::string_view to_string(OpLabel op) {
  switch (op) {
    case OpLabel::U:
      return "U";
    case OpLabel::H:
      return "H";
    case OpLabel::I:
      break;
  }
  return "I";
}

std::string to_string(StateLabel label) {
  std::string s(to_string(label.basis));
  s.push_back(label.bit ? '1' : '0');
  return s;
}

Basis parse_basis(std::string_view s) {
  if (s == "Z") return Basis::Z;
  if (s == "X") return Basis::X;
  throw ConfigError("unknown basis '" + std::string(s) + "'");
}

OpLabel parse_op(std::string_view s) {
  if (s == "I") return OpLabel::I;
  if (s == "U") return OpLabel::U;
  if (s == "H") return OpLabel::H;
  throw ConfigError("unknown operation '" + std::string(s) + "'");
}

}  // namespace qsdc
