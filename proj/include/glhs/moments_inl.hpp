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

#ifndef GLHS_MOMENTS_INL_HPP_
#define GLHS_MOMENTS_INL_HPP_

#include <cmath>

namespace glhs {

template <typename Fn>
void for_each_success(std::size_t n, double q, RngCursor& rng, Fn&& fn) {
  if (q <= 0.0 || n == 0) return;
  if (q >= 1.0) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const double log_fail = std::log1p(-q);
  std::size_t i = 0;
  while (true) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double skip = std::floor(std::log(u) / log_fail);
    if (skip >= static_cast<double>(n - i)) return;
    i += static_cast<std::size_t>(skip);
    fn(i);
    if (++i >= n) return;
  }
}

template <typename Set>
void sample_column_into(const ColumnMixture& dist, double gamma, RngCursor& rng, Set&& set) {
  const auto& comps = dist.components();
  double u = rng.uniform();
  std::size_t pick = comps.size() - 1;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (u < comps[c].weight) {
      pick = c;
      break;
    }
    u -= comps[c].weight;
  }
  const Component& comp = comps[pick];
  switch (comp.kind) {
    case ComponentKind::kExactlyOne:
      set(static_cast<std::size_t>(rng.below(dist.k())), true);
      break;
    case ComponentKind::kProductBernoulli:
      for_each_success(dist.k(), comp.q, rng, [&](std::size_t i) { set(i, true); });
      break;
    case ComponentKind::kAllZero:
      break;
  }
  for_each_success(dist.k(), gamma, rng, [&](std::size_t i) { set(i, rng.bit()); });
}

}  // namespace glhs

#endif  // GLHS_MOMENTS_INL_HPP_
