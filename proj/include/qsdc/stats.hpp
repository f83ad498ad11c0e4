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

#ifndef QSDC_STATS_HPP
#define QSDC_STATS_HPP

#include <cmath>
#include <cstddef>

namespace qsdc {

/// Standard error of a binomial proportion with success probability p.
inline double binomial_sigma(double p, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z);

/// |observed - expected| <= k_sigma * sigma(expected, n). A zero-variance
/// expectation (p in {0, 1}) demands an exact match.
bool within_binomial_band(double observed, double expected, std::size_t n, double k_sigma);

/// z-statistic of k successes in n trials against success probability p.
double binomial_z(std::size_t k, std::size_t n, double p);

/// Two-sided critical z for significance alpha (normal approximation).
double two_sided_z_critical(double alpha);

}  // namespace qsdc

#endif  // QSDC_STATS_HPP
