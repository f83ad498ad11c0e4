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

#ifndef QSDC_SELFTEST_HPP
#define QSDC_SELFTEST_HPP

// Built-in consistency suite: amplitude vs. symbolic gate action, gate
// invariants, measurement statistics and honest end-to-end sessions.

#include <cstddef>
#include <string>
#include <vector>

#include "qsdc/quantum.hpp"

namespace qsdc {

struct SelfTestCheck {
  std::string name;
  std::size_t cases = 0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  double seconds = 0.0;

  bool passed() const;
  std::size_t failure_count() const;
};

/// Exhaustive length of op sequences in the oracle sweep (4 * 3^6 = 2916 cases).
inline constexpr std::size_t kOracleSequenceLength = 6;

/// Runs the suite with `gates` driving every amplitude computation.
SelfTestReport run_selftest(const GateSet& gates = GateSet::canonical());

/// Canonical gates with H replaced by a rotation off by `epsilon` radians.
GateSet perturbed_hadamard(double epsilon);

}  // namespace qsdc

#endif  // QSDC_SELFTEST_HPP
