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

#include "glhs/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glhs {

namespace {

constexpr std::uint64_t kDecodeStream = 0x4443;
constexpr std::uint64_t kEnumerationGuard = 10'000'000;

// Draws b and a k x cols matrix column by column; gamma = 0 gives D_b.
BitMatrix draw_columns(const ColumnMixture& dist, double gamma, std::size_t cols, RngCursor& rng) {
  BitMatrix x(dist.k(), cols);
  for (std::size_t j = 0; j < cols; ++j) {
    sample_column_into(dist, gamma, rng, [&](std::size_t i, bool bit) { x.set(i, j, bit); });
  }
  return x;
}

std::size_t pick_edge(const LabelCoverInstance& inst, std::uint64_t seed, std::uint64_t index) {
  if (inst.edges.empty()) throw PreconditionError("instance has no edges");
  RngCursor rng(seed, substream(kEdgeStream, index));
  return static_cast<std::size_t>(rng.below(inst.edges.size()));
}

void check_edge_arity(const LabelCoverInstance& inst, const TestSpec& spec) {
  if (inst.k != spec.k()) throw DimensionError("instance arity does not match spec k");
}

}  // namespace

std::string TestSpec::describe() const {
  std::ostringstream os;
  os << pair.describe(gamma) << " R=" << R;
  return os.str();
}

TestSpec make_test_spec(std::size_t k, double eps, double p, std::size_t R, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  if (R == 0) throw DomainError("R must be positive");
  TestSpec spec;
  spec.pair = build_pair(k, eps, p);
  spec.R = R;
  spec.gamma = gamma;
  spec.noisy0 = NoisySource(spec.pair.d0, gamma);
  spec.noisy1 = NoisySource(spec.pair.d1, gamma);
  return spec;
}

LabeledExample dict_test_sample(const TestSpec& spec, std::uint64_t seed, std::uint64_t index) {
  RngCursor rng(seed, substream(kExampleStream, index));
  LabeledExample ex;
  ex.label = rng.bit() ? 1 : 0;
  ex.features = draw_columns(spec.clean(ex.label), spec.gamma, spec.R, rng);
  return ex;
}

double dictator_or_acceptance(const TestSpec& spec) {
  return 0.5 * spec.noisy0.prob_all_zero() + 0.5 * (1.0 - spec.noisy1.prob_all_zero());
}

LabeledExample ug_reduce_sample(const LabelCoverInstance& inst, const TestSpec& spec, std::uint64_t seed,
                                std::uint64_t index) {
  check_edge_arity(inst, spec);
  if (inst.M != spec.R || inst.N != spec.R) throw DimensionError("unique reduction needs M = N = R");
  if (!inst.all_bijections()) throw DomainError("unique reduction needs bijective projections");
  const Hyperedge& edge = inst.edges[pick_edge(inst, seed, index)];

  RngCursor rng(seed, substream(kExampleStream, index));
  LabeledExample ex;
  ex.label = rng.bit() ? 1 : 0;
  const BitMatrix x = draw_columns(spec.clean(ex.label), spec.gamma, spec.R, rng);

  ex.features = BitMatrix(inst.num_vertices(), spec.R);
  for (std::size_t i = 0; i < edge.vertices.size(); ++i) {
    const Projection& pi = edge.projections[i];
    for (std::size_t j = 0; j < spec.R; ++j) ex.features.set(edge.vertices[i], j, x.at(i, pi[j]));
  }
  return ex;
}

LabeledExample lc_reduce_sample_on_edge(const LabelCoverInstance& inst, const TestSpec& spec, std::size_t e,
                                        std::uint64_t seed, std::uint64_t index) {
  check_edge_arity(inst, spec);
  if (inst.N != spec.R) throw DimensionError("label cover reduction needs R = N");
  if (e >= inst.edges.size()) throw DimensionError("edge index out of range");
  const Hyperedge& edge = inst.edges[e];

  RngCursor rng(seed, substream(kExampleStream, index));
  LabeledExample ex;
  ex.label = rng.bit() ? 1 : 0;
  const BitMatrix x = draw_columns(spec.clean(ex.label), 0.0, inst.N, rng);

  ex.features = BitMatrix(inst.num_vertices(), inst.M);
  for (std::size_t i = 0; i < edge.vertices.size(); ++i) {
    const std::size_t v = edge.vertices[i];
    const Projection& pi = edge.projections[i];
    for (std::size_t j = 0; j < inst.M; ++j) ex.features.set(v, j, x.at(i, pi[j]));
    for_each_success(inst.M, spec.gamma, rng, [&](std::size_t j) { ex.features.set(v, j, rng.bit()); });
  }
  return ex;
}

LabeledExample lc_reduce_sample(const LabelCoverInstance& inst, const TestSpec& spec, std::uint64_t seed,
                                std::uint64_t index) {
  return lc_reduce_sample_on_edge(inst, spec, pick_edge(inst, seed, index), seed, index);
}

std::vector<LabeledExample> sample_stream(SamplerKind kind, const TestSpec& spec, const LabelCoverInstance* inst,
                                          std::uint64_t seed, std::uint64_t count, unsigned workers) {
  if (kind != SamplerKind::kDictTest && inst == nullptr) throw PreconditionError("reduction needs an instance");
  std::vector<LabeledExample> out(count);
  const std::size_t n = static_cast<std::size_t>(count);
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(n, 16 * std::max(1u, workers)));
  parallel_chunks(n, chunks, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      switch (kind) {
        case SamplerKind::kDictTest:
          out[i] = dict_test_sample(spec, seed, i);
          break;
        case SamplerKind::kUniqueReduction:
          out[i] = ug_reduce_sample(*inst, spec, seed, i);
          break;
        case SamplerKind::kLabelCoverReduction:
          out[i] = lc_reduce_sample(*inst, spec, seed, i);
          break;
      }
    }
  });
  return out;
}

Disjunction planted_disjunction(const Labeling& L, std::size_t M) {
  std::vector<std::size_t> lits;
  lits.reserve(L.size());
  for (std::size_t v = 0; v < L.size(); ++v) {
    if (L[v] >= M) throw DimensionError("label out of range");
    lits.push_back(v * M + L[v]);
  }
  return Disjunction(L.size() * M, std::move(lits));
}

double tau_dict_preset(std::size_t k) { return std::pow(static_cast<double>(k), -7.0); }
double tau_label_cover_preset(std::size_t k) { return std::pow(static_cast<double>(k), -13.0); }

double t_label_cover_preset(std::size_t k, double tau, std::size_t d) {
  const double kk = static_cast<double>(k);
  const double log_inv = std::log(1.0 / tau);
  const double inner = std::ceil(4.0 * kk * kk * std::log(2.0 * kk)) * std::ceil(4.0 * log_inv) + log_inv +
                       10.0 * std::log(static_cast<double>(d));
  return inner / (tau * tau);
}

namespace {

// Candidate labels for one vertex: B_t(w_v), or all of [M] for a zero block.
std::vector<std::size_t> candidates(const Halfspace& h, std::size_t v, std::size_t t) {
  const std::vector<double> w = h.block(v);
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) {
    std::vector<std::size_t> all(h.cols);
    for (std::size_t j = 0; j < h.cols; ++j) all[j] = j;
    return all;
  }
  return top_indices(w, std::min(t, h.cols));
}

}  // namespace

Labeling decode_labeling(const Halfspace& h, const DecoderSpec& d, RngCursor& rng) {
  if (d.t == 0) throw DomainError("decoder needs t >= 1");
  Labeling L(h.rows);
  for (std::size_t v = 0; v < h.rows; ++v) {
    const auto cand = candidates(h, v, d.t);
    L[v] = static_cast<std::uint32_t>(cand[rng.below(cand.size())]);
  }
  return L;
}

WeakSatRate weak_sat_rate_of_decoder(const Halfspace& h, const DecoderSpec& d, const LabelCoverInstance& inst,
                                     std::size_t trials, std::uint64_t seed) {
  if (h.rows != inst.num_vertices() || h.cols != inst.M) throw DimensionError("halfspace shape does not match instance");
  std::uint64_t hits = 0;
  for (std::size_t r = 0; r < trials; ++r) {
    RngCursor rng(seed, substream(kDecodeStream, r));
    const Labeling L = decode_labeling(h, d, rng);
    for (std::size_t e = 0; e < inst.edges.size(); ++e) hits += weakly_satisfied(inst, L, e) ? 1 : 0;
  }
  WeakSatRate out;
  out.rate = proportion(hits, static_cast<std::uint64_t>(trials) * inst.edges.size());
  out.mean_fraction = out.rate.rate;
  return out;
}

double edge_weak_sat_probability(const Halfspace& h, std::size_t t, const LabelCoverInstance& inst, std::size_t e) {
  if (e >= inst.edges.size()) throw DimensionError("edge index out of range");
  if (t == 0) throw DomainError("decoder needs t >= 1");
  const Hyperedge& edge = inst.edges[e];

  std::vector<std::size_t> distinct = edge.vertices;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::vector<std::size_t>> cand;
  std::uint64_t total = 1;
  for (std::size_t v : distinct) {
    cand.push_back(candidates(h, v, t));
    total *= cand.back().size();
    if (total > kEnumerationGuard) throw GuardError("per-edge label enumeration exceeds 1e7 assignments");
  }
  std::vector<std::size_t> slot_of(edge.vertices.size());
  for (std::size_t i = 0; i < edge.vertices.size(); ++i) {
    slot_of[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), edge.vertices[i]) -
                                          distinct.begin());
  }

  std::vector<std::size_t> pos(distinct.size(), 0);
  std::vector<std::uint32_t> proj(edge.vertices.size());
  std::uint64_t hits = 0;
  for (std::uint64_t step = 0; step < total; ++step) {
    for (std::size_t i = 0; i < proj.size(); ++i) proj[i] = edge.projections[i][cand[slot_of[i]][pos[slot_of[i]]]];
    bool sat = false;
    for (std::size_t i = 0; i < proj.size() && !sat; ++i) {
      for (std::size_t j = i + 1; j < proj.size(); ++j) {
        if (slot_of[i] != slot_of[j] && proj[i] == proj[j]) {
          sat = true;
          break;
        }
      }
    }
    hits += sat ? 1 : 0;
    for (std::size_t a = 0; a < pos.size(); ++a) {
      if (++pos[a] < cand[a].size()) break;
      pos[a] = 0;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

double niceness_value(const std::vector<double>& w, double tau, const Projection& pi, std::size_t N,
                      RegularizingReading reading) {
  if (pi.size() != w.size()) throw DimensionError("projection length does not match block");
  const auto S = reading == RegularizingReading::kPrefix ? regularizing_prefix(w, tau) : critical_set(w, tau);
  const std::vector<double> l = remove_indices(w, S);
  const double norm = l2_norm(l);
  if (norm == 0.0) return 0.0;
  std::vector<double> mass(N, 0.0);
  for (std::size_t j = 0; j < l.size(); ++j) {
    if (pi[j] >= N) throw DimensionError("projection target out of range");
    mass[pi[j]] += std::fabs(l[j]);
  }
  double sum = 0.0;
  for (double m : mass) sum += m * m * m * m;
  const double n2 = norm * norm;
  return sum / (n2 * n2);
}

bool is_beta_nice(const std::vector<double>& w, double tau, const Projection& pi, std::size_t N, double beta,
                  RegularizingReading reading) {
  return niceness_value(w, tau, pi, N, reading) <= beta;
}

double edge_niceness_audit(const LabelCoverInstance& inst, const Halfspace& h, double tau, double beta,
                           RegularizingReading reading) {
  if (h.rows != inst.num_vertices() || h.cols != inst.M) throw DimensionError("halfspace shape does not match instance");
  if (inst.edges.empty()) return 1.0;
  std::vector<std::vector<double>> blocks(h.rows);
  for (std::size_t v = 0; v < h.rows; ++v) blocks[v] = h.block(v);
  std::size_t nice = 0;
  for (const Hyperedge& edge : inst.edges) {
    bool ok = true;
    for (std::size_t i = 0; i < edge.vertices.size() && ok; ++i) {
      ok = is_beta_nice(blocks[edge.vertices[i]], tau, edge.projections[i], inst.N, beta, reading);
    }
    nice += ok ? 1 : 0;
  }
  return static_cast<double>(nice) / static_cast<double>(inst.edges.size());
}

bool disjoint_tops(const Halfspace& h, const LabelCoverInstance& inst, std::size_t e, std::size_t t) {
  if (e >= inst.edges.size()) throw DimensionError("edge index out of range");
  const Hyperedge& edge = inst.edges[e];
  std::vector<std::vector<std::uint32_t>> sets;
  for (std::size_t i = 0; i < edge.vertices.size(); ++i) {
    std::vector<std::uint32_t> s;
    for (std::size_t j : top_indices(h.block(edge.vertices[i]), std::min(t, h.cols))) s.push_back(edge.projections[i][j]);
    std::sort(s.begin(), s.end());
    sets.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (edge.vertices[i] == edge.vertices[j]) continue;
      std::vector<std::uint32_t> both;
      std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(), std::back_inserter(both));
      if (!both.empty()) return false;
    }
  }
  return true;
}

double block_coordinate_mean(const TestSpec& spec, int b) { return spec.noisy(b).set_moment(1); }

}  // namespace glhs
