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

#ifndef GLHS_LABELCOVER_HPP_
#define GLHS_LABELCOVER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace glhs {

using Projection = std::vector<std::uint32_t>;  // [M] -> [N]
using Labeling = std::vector<std::uint32_t>;    // V -> [M]

struct Hyperedge {
  std::vector<std::size_t> vertices;      // ordered k-tuple, repeats allowed
  std::vector<Projection> projections;    // one per slot
};

struct LabelCoverInstance {
  std::size_t k = 0;
  std::size_t M = 0;
  std::size_t N = 0;
  std::vector<std::string> vertex_names;
  std::vector<Hyperedge> edges;
  std::optional<Labeling> planted;

  std::size_t num_vertices() const { return vertex_names.size(); }
  // Throws FormatError describing the first violated invariant.
  void validate() const;
  bool is_connected() const;
  bool all_bijections() const;
  // Edges containing v, each listed once.
  std::vector<std::size_t> incident_edges(std::size_t v) const;
};

bool strongly_satisfied(const LabelCoverInstance& inst, const Labeling& L, std::size_t e);
// Some pair of slots holding distinct vertices projects to the same label.
bool weakly_satisfied(const LabelCoverInstance& inst, const Labeling& L, std::size_t e);

struct SatisfactionFractions {
  double strong = 0.0;
  double weak = 0.0;
};

SatisfactionFractions satisfaction_fractions(const LabelCoverInstance& inst, const Labeling& L);

struct PlantedInstance {
  LabelCoverInstance instance;
  Labeling labeling;
};

// Bijective projections over [R]; edges use k distinct vertices.
PlantedInstance gen_planted_unique(std::size_t num_vertices, std::size_t num_edges, std::size_t k, std::size_t R,
                                   std::uint64_t seed);

// Projections [M] -> [N] with every preimage of size <= d.
PlantedInstance gen_planted_projection(std::size_t num_vertices, std::size_t num_edges, std::size_t k,
                                       std::size_t M, std::size_t N, std::size_t d, std::uint64_t seed);

struct BipartiteEdge {
  std::size_t w = 0;
  std::size_t v = 0;
  Projection projection;
};

struct BipartiteInstance {
  std::size_t num_w = 0;
  std::size_t M = 0;
  std::size_t N = 0;
  std::vector<std::string> v_names;
  std::vector<BipartiteEdge> edges;

  std::size_t num_v() const { return v_names.size(); }
  // Checks totality, ranges and W-side regularity.
  void validate() const;
  std::vector<std::vector<std::size_t>> neighborhoods() const;  // edge ids per w
};

struct PlantedBipartite {
  BipartiteInstance instance;
  Labeling v_labels;
  Labeling w_labels;
};

PlantedBipartite gen_planted_bipartite(std::size_t num_w, std::size_t num_v, std::size_t degree, std::size_t M,
                                       std::size_t N, std::size_t d, std::uint64_t seed);

// Collision-rate fixture over a prime M: every v has M (M - 1) neighbors whose
// projections are pi_{a,s}(i) = ((a i + s) mod M) / d for a = 1..M-1,
// s = 0..M-1, so N = ceil(M / d). Each label pair collides under the same
// number of maps, giving pair smoothness sum_b |b| (|b| - 1) / (M (M - 1))
// over the preimage blocks b. Requires degree <= num_v and
// degree | num_v * M * (M - 1).
BipartiteInstance gen_affine_bipartite(std::size_t num_v, std::size_t degree, std::size_t M, std::size_t d);

// All ordered k-tuples (with repetition) of each w's neighbors.
LabelCoverInstance smooth_from_bipartite(const BipartiteInstance& bip, std::size_t k);

struct SmoothnessAudit {
  double value = 0.0;   // max over i != j of the collision frequency
  bool exact = true;
  double ci_lo = 0.0;   // only meaningful when !exact
  double ci_hi = 0.0;
  std::size_t incident = 0;
};

// Exact scan enumerates colliding pairs inside each preimage; falls back to
// an edge subsample with a Wilson interval when the pair budget is exceeded.
SmoothnessAudit audit_smoothness(const LabelCoverInstance& inst, std::size_t v,
                                 std::uint64_t pair_budget = 50'000'000, std::uint64_t seed = 0);
// Max over vertices with incident edges.
SmoothnessAudit audit_smoothness_all(const LabelCoverInstance& inst);
std::size_t audit_preimage(const LabelCoverInstance& inst);

std::string instance_to_json(const LabelCoverInstance& inst);
LabelCoverInstance instance_from_json(const std::string& text);
void write_instance(const std::string& path, const LabelCoverInstance& inst);
LabelCoverInstance read_instance(const std::string& path);

}  // namespace glhs

#endif  // GLHS_LABELCOVER_HPP_
