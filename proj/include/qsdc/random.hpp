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

#ifndef QSDC_RANDOM_HPP
#define QSDC_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace qsdc {

/// Mixes a 64-bit value (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Deterministic seed for the `index`-th child of `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seedable, splittable random stream.
///
/// std::mt19937_64 engine; every draw is built on raw engine output and is
/// bit-exact across platforms.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();

  /// Uniform in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p);

  std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

  /// Independent child stream, numbered in call order.
  RandomSource split();

  /// Uniformly random permutation of [0, n) (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

  /// Uniformly random k-subset of [0, n), sorted ascending.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

 private:
  std::uint64_t seed_;
  std::uint64_t children_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace qsdc

#endif  // QSDC_RANDOM_HPP
