#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "glhs/core.hpp"
#include "glhs/labelcover.hpp"

namespace glhs {
namespace {

// Brute-force pair smoothness at v: max over i < j of the fraction of incident
// edges whose slot projection sends i and j to the same label.
double oracle_smoothness(const LabelCoverInstance& inst, std::size_t v) {
  std::vector<const Projection*> ps;
  for (const auto& e : inst.edges) {
    for (std::size_t s = 0; s < e.vertices.size(); ++s) {
      if (e.vertices[s] == v) {
        ps.push_back(&e.projections[s]);
        break;
      }
    }
  }
  double best = 0.0;
  for (std::size_t i = 0; i < inst.M; ++i) {
    for (std::size_t j = i + 1; j < inst.M; ++j) {
      std::size_t hits = 0;
      for (const auto* p : ps) hits += (*p)[i] == (*p)[j];
      best = std::max(best, static_cast<double>(hits) / static_cast<double>(ps.size()));
    }
  }
  return best;
}

TEST(LabelCover, UniqueGeneratorInvariants) {
  const auto pi = gen_planted_unique(30, 80, 4, 7, 11);
  const auto& inst = pi.instance;
  EXPECT_NO_THROW(inst.validate());
  EXPECT_TRUE(inst.all_bijections());
  EXPECT_EQ(inst.edges.size(), 80u);
  EXPECT_EQ(audit_preimage(inst), 1u);
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    const auto& vs = inst.edges[e].vertices;
    EXPECT_EQ(std::set<std::size_t>(vs.begin(), vs.end()).size(), 4u);
    EXPECT_TRUE(strongly_satisfied(inst, pi.labeling, e));
    EXPECT_TRUE(weakly_satisfied(inst, pi.labeling, e));
  }
  ASSERT_TRUE(inst.planted.has_value());
  EXPECT_EQ(*inst.planted, pi.labeling);
  const auto f = satisfaction_fractions(inst, pi.labeling);
  EXPECT_DOUBLE_EQ(f.strong, 1.0);
  EXPECT_DOUBLE_EQ(f.weak, 1.0);
}

TEST(LabelCover, UniqueGeneratorDeterministic) {
  const auto a = gen_planted_unique(20, 40, 3, 5, 99);
  const auto b = gen_planted_unique(20, 40, 3, 5, 99);
  const auto c = gen_planted_unique(20, 40, 3, 5, 100);
  EXPECT_EQ(instance_to_json(a.instance), instance_to_json(b.instance));
  EXPECT_NE(instance_to_json(a.instance), instance_to_json(c.instance));
}

TEST(LabelCover, ProjectionGeneratorPreimageBound) {
  for (std::size_t d : {1u, 2u, 3u}) {
    const auto pi = gen_planted_projection(25, 60, 3, 3 * d, 3, d, 5 + d);
    EXPECT_NO_THROW(pi.instance.validate());
    EXPECT_LE(audit_preimage(pi.instance), d);
    EXPECT_DOUBLE_EQ(satisfaction_fractions(pi.instance, pi.labeling).strong, 1.0);
  }
}

TEST(LabelCover, ProjectionGeneratorInfeasible) {
  EXPECT_THROW(gen_planted_projection(10, 5, 3, 10, 3, 2, 1), FeasibilityError);
  EXPECT_THROW(gen_planted_projection(2, 5, 3, 4, 2, 2, 1), Error);
}

TEST(LabelCover, WeakIgnoresRepeatedVertex) {
  LabelCoverInstance inst;
  inst.k = 2;
  inst.M = 2;
  inst.N = 2;
  inst.vertex_names = {"a", "b"};
  inst.edges.push_back({{0, 0}, {{0, 1}, {1, 0}}});
  inst.edges.push_back({{0, 1}, {{0, 1}, {1, 0}}});
  inst.validate();
  // Vertex 0 labelled 0: slots project to 0 and 1 on edge 0 (same vertex).
  const Labeling L = {0, 1};
  EXPECT_FALSE(weakly_satisfied(inst, L, 0));
  EXPECT_FALSE(strongly_satisfied(inst, L, 0));
  // Edge 1: vertex 0 -> 0, vertex 1 label 1 -> 0.
  EXPECT_TRUE(weakly_satisfied(inst, L, 1));
  EXPECT_TRUE(strongly_satisfied(inst, L, 1));
  const Labeling L2 = {0, 0};
  EXPECT_FALSE(weakly_satisfied(inst, L2, 1));
  const auto f = satisfaction_fractions(inst, L);
  EXPECT_DOUBLE_EQ(f.weak, 0.5);
}

TEST(LabelCover, StrongImpliesWeakOnDistinctEdges) {
  const auto pi = gen_planted_projection(12, 50, 3, 4, 2, 2, 8);
  RngCursor rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    Labeling L(pi.instance.num_vertices());
    for (auto& x : L) x = static_cast<std::uint32_t>(rng.below(4));
    for (std::size_t e = 0; e < pi.instance.edges.size(); ++e) {
      if (strongly_satisfied(pi.instance, L, e)) {
        EXPECT_TRUE(weakly_satisfied(pi.instance, L, e));
      }
    }
  }
}

TEST(LabelCover, ValidateNamesField) {
  auto inst = gen_planted_unique(6, 3, 3, 4, 2).instance;
  inst.edges[1].projections[2][0] = 9;
  try {
    inst.validate();
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("edges[1].projections[2]"), std::string::npos) << e.what();
  }
  inst = gen_planted_unique(6, 3, 3, 4, 2).instance;
  inst.edges[0].vertices[1] = 17;
  try {
    inst.validate();
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("edges[0].vertices[1]"), std::string::npos) << e.what();
  }
}

TEST(LabelCover, JsonRoundTrip) {
  const auto pi = gen_planted_projection(9, 12, 3, 6, 3, 2, 4);
  const auto back = instance_from_json(instance_to_json(pi.instance));
  EXPECT_EQ(back.k, pi.instance.k);
  EXPECT_EQ(back.M, 6u);
  EXPECT_EQ(back.N, 3u);
  EXPECT_EQ(back.vertex_names, pi.instance.vertex_names);
  ASSERT_EQ(back.edges.size(), pi.instance.edges.size());
  for (std::size_t e = 0; e < back.edges.size(); ++e) {
    EXPECT_EQ(back.edges[e].vertices, pi.instance.edges[e].vertices);
    EXPECT_EQ(back.edges[e].projections, pi.instance.edges[e].projections);
  }
  EXPECT_EQ(back.planted, pi.instance.planted);

  const std::string path = ::testing::TempDir() + "lc_roundtrip.json";
  write_instance(path, pi.instance);
  EXPECT_EQ(instance_to_json(read_instance(path)), instance_to_json(pi.instance));
  std::remove(path.c_str());
}

TEST(LabelCover, JsonRejectsMalformed) {
  EXPECT_THROW(instance_from_json("{"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"format":"other","version":1})"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"format":"glhs-label-cover","version":2})"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"format":"glhs-label-cover","version":1,"k":2,"M":2,"N":2})"), FormatError);
}

TEST(LabelCover, UniqueSmoothnessIsZero) {
  const auto inst = gen_planted_unique(15, 40, 3, 6, 21).instance;
  const auto a = audit_smoothness_all(inst);
  EXPECT_TRUE(a.exact);
  EXPECT_DOUBLE_EQ(a.value, 0.0);
}

TEST(LabelCover, AffineFixtureSmoothness) {
  for (std::size_t M : {5u, 7u}) {
    for (std::size_t d : {2u, 3u}) {
      const auto bip = gen_affine_bipartite(3, 3, M, d);
      EXPECT_NO_THROW(bip.validate());
      const auto inst = smooth_from_bipartite(bip, 2);
      EXPECT_NO_THROW(inst.validate());
      EXPECT_EQ(inst.N, (M + d - 1) / d);
      EXPECT_EQ(audit_preimage(inst), d);
      const std::size_t r = M % d;
      const double collisions = static_cast<double>((M / d) * d * (d - 1) + r * (r - 1));
      const double expected = collisions / static_cast<double>(M * (M - 1));
      for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
        const auto a = audit_smoothness(inst, v);
        EXPECT_TRUE(a.exact);
        EXPECT_NEAR(a.value, oracle_smoothness(inst, v), 1e-15);
        EXPECT_NEAR(a.value, expected, 1e-15);
      }
    }
  }
  EXPECT_THROW(gen_affine_bipartite(3, 3, 9, 2), DomainError);
}

TEST(LabelCover, SubsampledAuditBracketsExact) {
  const auto inst = smooth_from_bipartite(gen_affine_bipartite(3, 3, 7, 3), 2);
  const auto exact = audit_smoothness(inst, 0);
  const auto approx = audit_smoothness(inst, 0, 20, 7);
  EXPECT_TRUE(exact.exact);
  EXPECT_FALSE(approx.exact);
  EXPECT_LE(approx.ci_lo, approx.value);
  EXPECT_GE(approx.ci_hi, approx.value);
}

TEST(LabelCover, SmoothFromBipartiteTupleCount) {
  const auto planted = gen_planted_bipartite(5, 8, 3, 4, 2, 2, 13);
  EXPECT_NO_THROW(planted.instance.validate());
  for (std::size_t k : {1u, 2u, 3u}) {
    const auto inst = smooth_from_bipartite(planted.instance, k);
    std::size_t expected = 5;
    for (std::size_t i = 0; i < k; ++i) expected *= 3;
    EXPECT_EQ(inst.edges.size(), expected);
    EXPECT_EQ(inst.k, k);
    // The planted V labels project consistently through every tuple.
    EXPECT_DOUBLE_EQ(satisfaction_fractions(inst, planted.v_labels).strong, 1.0);
  }
  for (const auto& e : planted.instance.edges) {
    EXPECT_EQ(e.projection[planted.v_labels[e.v]], planted.w_labels[e.w]);
  }
}

TEST(LabelCover, BipartiteValidateRegularity) {
  auto bip = gen_planted_bipartite(3, 6, 2, 4, 2, 2, 1).instance;
  bip.edges.pop_back();
  EXPECT_THROW(bip.validate(), FormatError);
}

TEST(LabelCover, Connectivity) {
  LabelCoverInstance inst;
  inst.k = 2;
  inst.M = inst.N = 1;
  inst.vertex_names = {"a", "b", "c", "d"};
  inst.edges.push_back({{0, 1}, {{0}, {0}}});
  inst.edges.push_back({{2, 3}, {{0}, {0}}});
  EXPECT_FALSE(inst.is_connected());
  inst.edges.push_back({{1, 2}, {{0}, {0}}});
  EXPECT_TRUE(inst.is_connected());
  EXPECT_EQ(inst.incident_edges(1), (std::vector<std::size_t>{0, 2}));
}

}  // namespace
}  // namespace glhs
