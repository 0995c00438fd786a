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

#ifndef GLHS_STATS_HPP_
#define GLHS_STATS_HPP_

#include <cstdint>

namespace glhs {

// Standard normal CDF. Uses erfc, accurate to ~1e-16 relative.
double normal_cdf(double x);

struct Proportion {
  std::uint64_t hits = 0;
  std::uint64_t n = 0;
  double rate = 0.0;
  double lo = 0.0;  // Wilson 95%
  double hi = 1.0;
  double sigma = 0.0;  // sqrt(rate (1 - rate) / n), floored at 1/n
};

Proportion proportion(std::uint64_t hits, std::uint64_t n);

// [lo, hi] Wilson score interval at z standard deviations.
void wilson_interval(std::uint64_t hits, std::uint64_t n, double z, double* lo, double* hi);

// Standard error of a difference of two independent proportions.
double diff_sigma(const Proportion& a, const Proportion& b);

}  // namespace glhs

#endif  // GLHS_STATS_HPP_
