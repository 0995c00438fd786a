// Copyright 2026 The glhs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "glhs/stats.hpp"

#include <algorithm>
#include <cmath>

namespace glhs {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void wilson_interval(std::uint64_t hits, std::uint64_t n, double z, double* lo, double* hi) {
  if (n == 0) {
    *lo = 0.0;
    *hi = 1.0;
    return;
  }
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  *lo = std::max(0.0, center - half);
  *hi = std::min(1.0, center + half);
}

Proportion proportion(std::uint64_t hits, std::uint64_t n) {
  Proportion out;
  out.hits = hits;
  out.n = n;
  if (n == 0) return out;
  const double nn = static_cast<double>(n);
  out.rate = static_cast<double>(hits) / nn;
  wilson_interval(hits, n, 1.959963984540054, &out.lo, &out.hi);
  out.lo = std::min(out.lo, out.rate);
  out.hi = std::max(out.hi, out.rate);
  out.sigma = std::max(std::sqrt(out.rate * (1.0 - out.rate) / nn), 1.0 / nn);
  return out;
}

double diff_sigma(const Proportion& a, const Proportion& b) {
  return std::sqrt(a.sigma * a.sigma + b.sigma * b.sigma);
}

}  // namespace glhs
