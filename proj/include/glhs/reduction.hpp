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

#ifndef GLHS_REDUCTION_HPP_
#define GLHS_REDUCTION_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "glhs/core.hpp"
#include "glhs/halfspace.hpp"
#include "glhs/labelcover.hpp"
#include "glhs/moments.hpp"
#include "glhs/stats.hpp"

namespace glhs {

struct TestSpec {
  GadgetPair pair;
  std::size_t R = 0;
  double gamma = 0.0;
  NoisySource noisy0;
  NoisySource noisy1;

  std::size_t k() const { return pair.k; }
  const NoisySource& noisy(int b) const { return b ? noisy1 : noisy0; }
  const ColumnMixture& clean(int b) const { return b ? pair.d1 : pair.d0; }
  std::string describe() const;
};

TestSpec make_test_spec(std::size_t k, double eps, double p, std::size_t R, double gamma);
inline double default_gamma(std::size_t k) { return 1.0 / (static_cast<double>(k) * static_cast<double>(k)); }

// Per-example randomness. The label and the k x R matrix are drawn from
// RngCursor(seed, substream(kExampleStream, index)): one word for b, then
// columns 0..R-1 in order. Edge choice uses a separate substream so that a
// single-edge identity instance reproduces dict_test_sample bit for bit.
inline constexpr std::uint64_t kExampleStream = 0x4558;
inline constexpr std::uint64_t kEdgeStream = 0x4544;

LabeledExample dict_test_sample(const TestSpec& spec, std::uint64_t seed, std::uint64_t index);

// 1/2 Pr_{D~0}[column all zero] + 1/2 (1 - Pr_{D~1}[column all zero]).
double dictator_or_acceptance(const TestSpec& spec);

// Figure 1: noise inside D~_b before pullback. Requires bijections, M = N = R.
LabeledExample ug_reduce_sample(const LabelCoverInstance& inst, const TestSpec& spec, std::uint64_t seed,
                                std::uint64_t index);

// Figure 2: x ~ D_b^N without noise, pulled back through each slot's
// projection, then gamma-noise on every coordinate of the edge's blocks.
// spec.R must equal inst.N. If an edge repeats a vertex, the later slot wins.
LabeledExample lc_reduce_sample(const LabelCoverInstance& inst, const TestSpec& spec, std::uint64_t seed,
                                std::uint64_t index);

// Same as lc_reduce_sample restricted to edge e.
LabeledExample lc_reduce_sample_on_edge(const LabelCoverInstance& inst, const TestSpec& spec, std::size_t e,
                                        std::uint64_t seed, std::uint64_t index);

enum class SamplerKind { kDictTest, kUniqueReduction, kLabelCoverReduction };

// Parallel over index ranges; output is independent of the worker count.
std::vector<LabeledExample> sample_stream(SamplerKind kind, const TestSpec& spec, const LabelCoverInstance* inst,
                                          std::uint64_t seed, std::uint64_t count, unsigned workers = 1);

// Literals (v, Lambda(v)) over the |V| x M grid.
Disjunction planted_disjunction(const Labeling& L, std::size_t M);

struct DecoderSpec {
  std::size_t t = 1;
  double tau = 0.1;
  std::size_t trials = 1;
};

double tau_dict_preset(std::size_t k);   // 1 / k^7
double tau_label_cover_preset(std::size_t k);  // 1 / k^13
// (1/tau^2) (ceil(4 k^2 ln 2k) ceil(4 ln(1/tau)) + ln(1/tau) + 10 ln d)
double t_label_cover_preset(std::size_t k, double tau, std::size_t d);

// Uniform label from B_t(w_v); vertices with an all-zero block get a uniform label in [M].
Labeling decode_labeling(const Halfspace& h, const DecoderSpec& d, RngCursor& rng);

struct WeakSatRate {
  Proportion rate;  // pooled over trials x edges
  double mean_fraction = 0.0;
};

WeakSatRate weak_sat_rate_of_decoder(const Halfspace& h, const DecoderSpec& d, const LabelCoverInstance& inst,
                                     std::size_t trials, std::uint64_t seed);

// Exact Pr[edge e weakly satisfied] under decode_labeling.
double edge_weak_sat_probability(const Halfspace& h, std::size_t t, const LabelCoverInstance& inst, std::size_t e);

enum class RegularizingReading { kPrefix, kCriticalSet };

// sum_i (sum_{j in pi^-1(i)} |l_j|)^4 / ||l||_2^4 where l is w minus its
// regularizing set; 0 when l vanishes.
double niceness_value(const std::vector<double>& w, double tau, const Projection& pi, std::size_t N,
                      RegularizingReading reading = RegularizingReading::kPrefix);
bool is_beta_nice(const std::vector<double>& w, double tau, const Projection& pi, std::size_t N, double beta,
                  RegularizingReading reading = RegularizingReading::kPrefix);

// Fraction of edges whose every slot is beta-nice.
double edge_niceness_audit(const LabelCoverInstance& inst, const Halfspace& h, double tau, double beta,
                           RegularizingReading reading = RegularizingReading::kPrefix);

// Projected top-t sets pairwise disjoint over slots holding distinct vertices.
bool disjoint_tops(const Halfspace& h, const LabelCoverInstance& inst, std::size_t e, std::size_t t);

// E[y_v^{(j)} | b] for a vertex on the sampled edge, identical for both b.
double block_coordinate_mean(const TestSpec& spec, int b);

}  // namespace glhs

#endif  // GLHS_REDUCTION_HPP_
