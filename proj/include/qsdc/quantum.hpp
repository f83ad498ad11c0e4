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

#ifndef QSDC_QUANTUM_HPP
#define QSDC_QUANTUM_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qsdc/random.hpp"

namespace qsdc {

using Complex = std::complex<double>;
using Bit = std::uint8_t;

/// Amplitude comparisons use this tolerance throughout.
inline constexpr double kTolerance = 1e-12;

/// Pure single-photon state alpha|0> + beta|1>.
struct PhotonState {
  Complex alpha;
  Complex beta;

  double norm_squared() const { return std::norm(alpha) + std::norm(beta); }
  bool is_normalized(double tol = kTolerance) const;
};

/// |<a|b>|
double overlap(const PhotonState& a, const PhotonState& b);

/// Equality modulo global phase.
bool same_ray(const PhotonState& a, const PhotonState& b, double tol = kTolerance);

enum class Basis : std::uint8_t { Z = 0, X = 1 };

inline Basis flip_basis(Basis b) { return b == Basis::Z ? Basis::X : Basis::Z; }
inline Basis basis_xor(Basis b, bool swap) { return swap ? flip_basis(b) : b; }

/// One of the four conjugate-basis states: (Z,0)=|H>, (Z,1)=|V>, (X,0)=|+>, (X,1)=|->.
struct StateLabel {
  Basis basis = Basis::Z;
  Bit bit = 0;

  friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

inline constexpr std::array<StateLabel, 4> kAllLabels = {
    StateLabel{Basis::Z, 0}, StateLabel{Basis::Z, 1}, StateLabel{Basis::X, 0},
    StateLabel{Basis::X, 1}};

enum class OpLabel : std::uint8_t { I = 0, U = 1, H = 2 };

inline constexpr std::array<OpLabel, 3> kAllOps = {OpLabel::I, OpLabel::U, OpLabel::H};

/// Net symbolic action of a product of {I, U, H}: bit-flip parity and
/// basis-swap parity. Composition is XOR in each component.
struct FrameEffect {
  bool flip = false;
  bool swap = false;

  FrameEffect& operator^=(const FrameEffect& o) {
    flip ^= o.flip;
    swap ^= o.swap;
    return *this;
  }
  friend FrameEffect operator^(FrameEffect a, const FrameEffect& b) { return a ^= b; }
  friend bool operator==(const FrameEffect&, const FrameEffect&) = default;
};

FrameEffect effect_of(OpLabel op);
StateLabel apply_effect(const FrameEffect& effect, StateLabel label);

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

/// Matrices used for I, U and H.
struct GateSet {
  Matrix2 identity;
  Matrix2 flip;      // U = i*sigma_y = |0><1| - |1><0|
  Matrix2 hadamard;  // H = (|0><0| - |1><1| + |0><1| + |1><0|) / sqrt(2)

  static const GateSet& canonical();
  const Matrix2& matrix(OpLabel op) const;
};

PhotonState apply_matrix(const Matrix2& m, const PhotonState& s);

PhotonState state_from_label(StateLabel label);

/// The canonical label whose state equals `s` up to global phase, if any.
std::optional<StateLabel> label_of(const PhotonState& s, double tol = kTolerance);

PhotonState apply_op(OpLabel op, const PhotonState& state);
PhotonState apply_op(const GateSet& gates, OpLabel op, const PhotonState& state);

StateLabel apply_op_symbolic(OpLabel op, StateLabel label);

FrameEffect compose_effects(std::span<const OpLabel> ops);

/// Probability of outcome 0 when measuring `state` in `basis`.
double probability_zero(const PhotonState& state, Basis basis);

/// Born-rule measurement. Always consumes exactly one draw from `rng`.
Bit measure(const PhotonState& state, Basis basis, RandomSource& rng);

/// A photon in flight. Move-only.
class Photon {
 public:
  explicit Photon(PhotonState state) : state_(state) {}
  static Photon prepare(StateLabel label) { return Photon(state_from_label(label)); }

  Photon(Photon&&) noexcept = default;
  Photon& operator=(Photon&&) noexcept = default;
  Photon(const Photon&) = delete;
  Photon& operator=(const Photon&) = delete;

  void apply(OpLabel op) { state_ = apply_op(op, state_); }
  void apply(const Matrix2& m) { state_ = apply_matrix(m, state_); }

  /// Projective measurement; the photon collapses onto the observed eigenstate.
  Bit measure(Basis basis, RandomSource& rng);

  /// Amplitude readout for simulator bookkeeping and invariant checks.
  const PhotonState& state() const { return state_; }

 private:
  PhotonState state_;
};

std::string_view to_string(Basis b);
std::string_view to_string(OpLabel op);
std::string to_string(StateLabel label);

Basis parse_basis(std::string_view s);
OpLabel parse_op(std::string_view s);

}  // namespace qsdc

#endif  // QSDC_QUANTUM_HPP
