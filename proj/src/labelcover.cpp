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

#include "glhs/labelcover.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "glhs/core.hpp"
#include "glhs/stats.hpp"
#include "json.hpp"

namespace glhs {
namespace {

constexpr std::uint64_t kUniqueStream = 0x4c43'0001;
constexpr std::uint64_t kProjectionStream = 0x4c43'0002;
constexpr std::uint64_t kBipartiteStream = 0x4c43'0003;
constexpr std::uint64_t kAuditStream = 0x4c43'0004;

std::string field(const std::string& path, const std::string& what) { return path + ": " + what; }

void check_projection(const Projection& p, std::size_t M, std::size_t N, const std::string& path) {
  if (p.size() != M) {
    throw FormatError(field(path, "projection has " + std::to_string(p.size()) + " entries, expected M = " +
                                      std::to_string(M) + " (not total)"));
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] >= N) {
      throw FormatError(field(path + "[" + std::to_string(j) + "]",
                              "value " + std::to_string(p[j]) + " outside [N] = [" + std::to_string(N) + "]"));
    }
  }
}

void shuffle(std::vector<std::uint32_t>& v, RngCursor& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

std::vector<std::size_t> distinct_sample(std::size_t n, std::size_t k, RngCursor& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
  pool.resize(k);
  return pool;
}

// Random projection with preimages <= d, then repaired so that label -> target.
Projection planted_projection(std::size_t M, std::size_t N, std::size_t d, std::uint32_t label,
                              std::uint32_t target, RngCursor& rng) {
  std::vector<std::uint32_t> slots;
  slots.reserve(N * d);
  for (std::uint32_t i = 0; i < N; ++i) {
    for (std::size_t r = 0; r < d; ++r) slots.push_back(i);
  }
  shuffle(slots, rng);
  Projection p(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(M));
  if (p[label] != target) {
    auto it = std::find(p.begin(), p.end(), target);
    if (it != p.end()) {
      std::swap(*it, p[label]);
    } else {
      p[label] = target;
    }
  }
  return p;
}

std::vector<std::string> default_names(std::size_t n, const char* prefix) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = prefix + std::to_string(i);
  return names;
}

}  // namespace

void LabelCoverInstance::validate() const {
  if (k == 0) throw FormatError("k: arity must be >= 1");
  if (M < N) throw FormatError("M: need M >= N (M = " + std::to_string(M) + ", N = " + std::to_string(N) + ")");
  if (N == 0) throw FormatError("N: label set must be nonempty");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string path = "edges[" + std::to_string(e) + "]";
    const auto& ed = edges[e];
    if (ed.vertices.size() != k) throw FormatError(field(path + ".vertices", "tuple size differs from k"));
    if (ed.projections.size() != k) throw FormatError(field(path + ".projections", "need one table per slot"));
    for (std::size_t s = 0; s < k; ++s) {
      if (ed.vertices[s] >= num_vertices()) {
        throw FormatError(field(path + ".vertices[" + std::to_string(s) + "]", "unknown vertex"));
      }
      check_projection(ed.projections[s], M, N, path + ".projections[" + std::to_string(s) + "]");
    }
  }
  if (planted) {
    if (planted->size() != num_vertices()) throw FormatError("planted: labeling is not total on V");
    for (std::size_t v = 0; v < planted->size(); ++v) {
      if ((*planted)[v] >= M) throw FormatError("planted[" + std::to_string(v) + "]: label outside [M]");
    }
  }
}

bool LabelCoverInstance::is_connected() const {
  const std::size_t n = num_vertices();
  if (n == 0) return true;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    for (std::size_t s = 1; s < e.vertices.size(); ++s) parent[find(e.vertices[s])] = find(e.vertices[0]);
  }
  const std::size_t root = find(0);
  for (std::size_t v = 1; v < n; ++v) {
    if (find(v) != root) return false;
  }
  return true;
}

bool LabelCoverInstance::all_bijections() const {
  if (M != N) return false;
  std::vector<char> seen(N);
  for (const auto& e : edges) {
    for (const auto& p : e.projections) {
      std::fill(seen.begin(), seen.end(), 0);
      for (auto x : p) {
        if (seen[x]) return false;
        seen[x] = 1;
      }
    }
  }
  return true;
}

std::vector<std::size_t> LabelCoverInstance::incident_edges(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& vs = edges[e].vertices;
    if (std::find(vs.begin(), vs.end(), v) != vs.end()) out.push_back(e);
  }
  return out;
}

namespace {

void check_labeling(const LabelCoverInstance& inst, const Labeling& L) {
  if (L.size() != inst.num_vertices()) throw DimensionError("labeling is not total on V");
  for (auto x : L) {
    if (x >= inst.M) throw DomainError("labeling value outside [M]");
  }
}

}  // namespace

bool strongly_satisfied(const LabelCoverInstance& inst, const Labeling& L, std::size_t e) {
  const auto& ed = inst.edges.at(e);
  const std::uint32_t first = ed.projections[0][L[ed.vertices[0]]];
  for (std::size_t s = 1; s < ed.vertices.size(); ++s) {
    if (ed.projections[s][L[ed.vertices[s]]] != first) return false;
  }
  return true;
}

bool weakly_satisfied(const LabelCoverInstance& inst, const Labeling& L, std::size_t e) {
  const auto& ed = inst.edges.at(e);
  for (std::size_t a = 0; a < ed.vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < ed.vertices.size(); ++b) {
      if (ed.vertices[a] == ed.vertices[b]) continue;
      if (ed.projections[a][L[ed.vertices[a]]] == ed.projections[b][L[ed.vertices[b]]]) return true;
    }
  }
  return false;
}

SatisfactionFractions satisfaction_fractions(const LabelCoverInstance& inst, const Labeling& L) {
  check_labeling(inst, L);
  SatisfactionFractions f;
  if (inst.edges.empty()) return f;
  std::size_t strong = 0;
  std::size_t weak = 0;
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    strong += strongly_satisfied(inst, L, e);
    weak += weakly_satisfied(inst, L, e);
  }
  f.strong = static_cast<double>(strong) / static_cast<double>(inst.edges.size());
  f.weak = static_cast<double>(weak) / static_cast<double>(inst.edges.size());
  return f;
}

PlantedInstance gen_planted_unique(std::size_t num_vertices, std::size_t num_edges, std::size_t k, std::size_t R,
                                   std::uint64_t seed) {
  return gen_planted_projection(num_vertices, num_edges, k, R, R, 1, seed ^ kUniqueStream);
}

PlantedInstance gen_planted_projection(std::size_t num_vertices, std::size_t num_edges, std::size_t k,
                                       std::size_t M, std::size_t N, std::size_t d, std::uint64_t seed) {
  if (num_vertices == 0 || num_edges == 0 || k == 0 || M == 0 || N == 0 || d == 0) {
    throw DomainError("generator parameters must be positive");
  }
  if (k > num_vertices) throw DomainError("need at least k vertices for distinct-vertex edges");
  if (M < N) throw DomainError("need M >= N");
  if (M > d * N) {
    throw FeasibilityError("infeasible: M = " + std::to_string(M) + " > d*N = " + std::to_string(d * N));
  }
  RngCursor rng(seed, kProjectionStream);
  PlantedInstance out;
  auto& inst = out.instance;
  inst.k = k;
  inst.M = M;
  inst.N = N;
  inst.vertex_names = default_names(num_vertices, "v");
  out.labeling.resize(num_vertices);
  for (auto& x : out.labeling) x = static_cast<std::uint32_t>(rng.below(M));
  inst.edges.reserve(num_edges);
  for (std::size_t e = 0; e < num_edges; ++e) {
    Hyperedge ed;
    ed.vertices = distinct_sample(num_vertices, k, rng);
    const auto target = static_cast<std::uint32_t>(rng.below(N));
    for (std::size_t v : ed.vertices) {
      ed.projections.push_back(planted_projection(M, N, d, out.labeling[v], target, rng));
    }
    inst.edges.push_back(std::move(ed));
  }
  inst.planted = out.labeling;
  return out;
}

void BipartiteInstance::validate() const {
  if (M < N || N == 0) throw FormatError("bipartite: need M >= N >= 1");
  std::vector<std::size_t> deg(num_w, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::string path = "bipartite.edges[" + std::to_string(i) + "]";
    if (e.w >= num_w) throw FormatError(field(path + ".w", "unknown W vertex"));
    if (e.v >= num_v()) throw FormatError(field(path + ".v", "unknown V vertex"));
    check_projection(e.projection, M, N, path + ".projection");
    ++deg[e.w];
  }
  for (std::size_t w = 0; w < num_w; ++w) {
    if (deg[w] == 0) throw FormatError("bipartite: W vertex " + std::to_string(w) + " has an empty neighborhood");
    if (deg[w] != deg[0]) throw FormatError("bipartite: W side is not regular (all W degrees must be equal)");
  }
}

std::vector<std::vector<std::size_t>> BipartiteInstance::neighborhoods() const {
  std::vector<std::vector<std::size_t>> nb(num_w);
  for (std::size_t i = 0; i < edges.size(); ++i) nb.at(edges[i].w).push_back(i);
  return nb;
}

PlantedBipartite gen_planted_bipartite(std::size_t num_w, std::size_t num_v, std::size_t degree, std::size_t M,
                                       std::size_t N, std::size_t d, std::uint64_t seed) {
  if (degree == 0 || degree > num_v) throw DomainError("degree must lie in [1, |V|]");
  if (M < N || M > d * N) throw FeasibilityError("need N <= M <= d*N");
  RngCursor rng(seed, kBipartiteStream);
  PlantedBipartite out;
  auto& bip = out.instance;
  bip.num_w = num_w;
  bip.M = M;
  bip.N = N;
  bip.v_names = default_names(num_v, "v");
  out.v_labels.resize(num_v);
  out.w_labels.resize(num_w);
  for (auto& x : out.v_labels) x = static_cast<std::uint32_t>(rng.below(M));
  for (auto& x : out.w_labels) x = static_cast<std::uint32_t>(rng.below(N));
  for (std::size_t w = 0; w < num_w; ++w) {
    for (std::size_t v : distinct_sample(num_v, degree, rng)) {
      bip.edges.push_back({w, v, planted_projection(M, N, d, out.v_labels[v], out.w_labels[w], rng)});
    }
  }
  return out;
}

BipartiteInstance gen_affine_bipartite(std::size_t num_v, std::size_t degree, std::size_t M, std::size_t d) {
  if (M < 2) throw DomainError("M must be a prime >= 2");
  for (std::size_t q = 2; q * q <= M; ++q) {
    if (M % q == 0) throw DomainError("M must be prime");
  }
  if (d == 0) throw DomainError("d must be >= 1");
  if (degree == 0 || degree > num_v) throw DomainError("degree must lie in [1, |V|]");
  const std::size_t maps = M * (M - 1);
  if ((num_v * maps) % degree != 0) throw DomainError("degree must divide |V| * M * (M - 1)");
  BipartiteInstance bip;
  bip.M = M;
  bip.N = (M + d - 1) / d;
  bip.v_names = default_names(num_v, "v");
  bip.num_w = num_v * maps / degree;
  std::size_t item = 0;
  for (std::size_t a = 1; a < M; ++a) {
    for (std::size_t s = 0; s < M; ++s) {
      Projection p(M);
      for (std::size_t i = 0; i < M; ++i) p[i] = static_cast<std::uint32_t>(((a * i + s) % M) / d);
      for (std::size_t v = 0; v < num_v; ++v, ++item) bip.edges.push_back({item / degree, v, p});
    }
  }
  return bip;
}

LabelCoverInstance smooth_from_bipartite(const BipartiteInstance& bip, std::size_t k) {
  if (k == 0) throw DomainError("k must be >= 1");
  const auto nb = bip.neighborhoods();
  for (std::size_t w = 0; w < nb.size(); ++w) {
    if (nb[w].empty()) throw DomainError("W vertex " + std::to_string(w) + " has an empty neighborhood");
  }
  LabelCoverInstance inst;
  inst.k = k;
  inst.M = bip.M;
  inst.N = bip.N;
  inst.vertex_names = bip.v_names;
  for (const auto& hood : nb) {
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      Hyperedge e;
      for (std::size_t s = 0; s < k; ++s) {
        const auto& be = bip.edges[hood[idx[s]]];
        e.vertices.push_back(be.v);
        e.projections.push_back(be.projection);
      }
      inst.edges.push_back(std::move(e));
      // Odometer with the last slot fastest.
      std::size_t s = k;
      while (s > 0 && ++idx[s - 1] == hood.size()) idx[--s] = 0;
      if (s == 0) break;
    }
  }
  return inst;
}

SmoothnessAudit audit_smoothness(const LabelCoverInstance& inst, std::size_t v, std::uint64_t pair_budget,
                                 std::uint64_t seed) {
  auto edges = inst.incident_edges(v);
  if (edges.empty()) throw DomainError("vertex " + std::to_string(v) + " has no incident edges");
  SmoothnessAudit out;
  out.incident = edges.size();

  auto slot_projection = [&](std::size_t e) -> const Projection& {
    const auto& ed = inst.edges[e];
    const auto it = std::find(ed.vertices.begin(), ed.vertices.end(), v);
    return ed.projections[static_cast<std::size_t>(it - ed.vertices.begin())];
  };
  auto pair_events = [&](const Projection& p) {
    std::vector<std::uint64_t> sizes(inst.N, 0);
    for (auto x : p) ++sizes[x];
    std::uint64_t total = 0;
    for (auto s : sizes) total += s * (s - 1) / 2;
    return total;
  };

  std::uint64_t events = 0;
  for (std::size_t e : edges) events += pair_events(slot_projection(e));
  std::vector<std::size_t> used = edges;
  if (events > pair_budget) {
    // Subsample incident edges so the expected event count fits the budget.
    out.exact = false;
    RngCursor rng(seed, substream(kAuditStream, v));
    const double keep = static_cast<double>(pair_budget) / static_cast<double>(events);
    used.clear();
    for (std::size_t e : edges) {
      if (rng.bernoulli(keep)) used.push_back(e);
    }
    if (used.empty()) used.push_back(edges[rng.below(edges.size())]);
  }

  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  std::uint32_t best = 0;
  std::vector<std::vector<std::uint32_t>> groups(inst.N);
  for (std::size_t e : used) {
    const auto& p = slot_projection(e);
    for (auto& g : groups) g.clear();
    for (std::uint32_t i = 0; i < p.size(); ++i) groups[p[i]].push_back(i);
    for (const auto& g : groups) {
      for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a + 1; b < g.size(); ++b) {
          const std::uint64_t key = (static_cast<std::uint64_t>(g[a]) << 32) | g[b];
          best = std::max(best, ++counts[key]);
        }
      }
    }
  }
  out.value = static_cast<double>(best) / static_cast<double>(used.size());
  if (out.exact) {
    out.ci_lo = out.ci_hi = out.value;
  } else {
    wilson_interval(best, used.size(), 1.959963984540054, &out.ci_lo, &out.ci_hi);
  }
  return out;
}

SmoothnessAudit audit_smoothness_all(const LabelCoverInstance& inst) {
  SmoothnessAudit worst;
  std::vector<char> has_edge(inst.num_vertices(), 0);
  for (const auto& e : inst.edges) {
    for (auto v : e.vertices) has_edge[v] = 1;
  }
  for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
    if (!has_edge[v]) continue;
    const auto a = audit_smoothness(inst, v);
    if (a.value > worst.value || worst.incident == 0) worst = a;
    worst.exact = worst.exact && a.exact;
  }
  return worst;
}

std::size_t audit_preimage(const LabelCoverInstance& inst) {
  std::size_t worst = 0;
  std::vector<std::size_t> sizes(inst.N);
  for (const auto& e : inst.edges) {
    for (const auto& p : e.projections) {
      std::fill(sizes.begin(), sizes.end(), 0);
      for (auto x : p) worst = std::max(worst, ++sizes[x]);
    }
  }
  return worst;
}

std::string instance_to_json(const LabelCoverInstance& inst) {
  // One edge per line keeps handcrafted fixtures diffable.
  std::ostringstream os;
  os << "{\n \"format\": \"glhs-label-cover\",\n \"version\": 1,\n"
     << " \"k\": " << inst.k << ",\n \"M\": " << inst.M << ",\n \"N\": " << inst.N << ",\n"
     << " \"vertices\": " << nlohmann::json(inst.vertex_names).dump() << ",\n";
  if (inst.planted) os << " \"planted\": " << nlohmann::json(*inst.planted).dump() << ",\n";
  os << " \"edges\": [";
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    nlohmann::json je;
    je["vertices"] = inst.edges[e].vertices;
    je["projections"] = inst.edges[e].projections;
    os << (e ? ",\n  " : "\n  ") << je.dump();
  }
  os << "\n ]\n}";
  return os.str();
}

LabelCoverInstance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("instance file: ") + e.what());
  }
  auto need = [](const nlohmann::json& obj, const std::string& key, const std::string& path) -> const nlohmann::json& {
    if (!obj.is_object() || !obj.contains(key)) throw FormatError(field(path, "missing field '" + key + "'"));
    return obj.at(key);
  };
  LabelCoverInstance inst;
  try {
    if (need(j, "format", "$") != "glhs-label-cover") throw FormatError("format: wrong format tag");
    if (need(j, "version", "$") != 1) throw FormatError("version: unsupported schema version");
    inst.k = need(j, "k", "$").get<std::size_t>();
    inst.M = need(j, "M", "$").get<std::size_t>();
    inst.N = need(j, "N", "$").get<std::size_t>();
    inst.vertex_names = need(j, "vertices", "$").get<std::vector<std::string>>();
    const auto& edges = need(j, "edges", "$");
    if (!edges.is_array()) throw FormatError("edges: expected an array");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string path = "edges[" + std::to_string(e) + "]";
      Hyperedge h;
      h.vertices = need(edges[e], "vertices", path).get<std::vector<std::size_t>>();
      h.projections = need(edges[e], "projections", path).get<std::vector<Projection>>();
      inst.edges.push_back(std::move(h));
    }
    if (j.contains("planted")) inst.planted = j.at("planted").get<Labeling>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("instance file: ") + e.what());
  }
  inst.validate();
  return inst;
}

void write_instance(const std::string& path, const LabelCoverInstance& inst) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << instance_to_json(inst) << "\n";
}

LabelCoverInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

}  // namespace glhs
