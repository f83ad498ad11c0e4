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

#include "qsdc/stats.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace qsdc {

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

bool within_binomial_band(double observed, double expected, std::size_t n, double k_sigma) {
  return std::abs(observed - expected) <= k_sigma * binomial_sigma(expected, n) + 1e-12;
}

double binomial_z(std::size_t k, std::size_t n, double p) {
  const double sigma = binomial_sigma(p, n);
  const double diff = static_cast<double>(k) / static_cast<double>(n) - p;
  return sigma == 0.0 ? (diff == 0.0 ? 0.0 : INFINITY) : diff / sigma;
}

double two_sided_z_critical(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  const boost::math::normal standard;
  return boost::math::quantile(boost::math::complement(standard, alpha / 2.0));
}

}  // namespace qsdc
