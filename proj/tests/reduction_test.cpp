#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "glhs/core.hpp"
#include "glhs/labelcover.hpp"
#include "glhs/reduction.hpp"

namespace glhs {
namespace {

constexpr std::size_t kK = 12;
constexpr double kEps = 0.8;
constexpr double kP = 0.25;

// One hyperedge over vertices 0..k-1 with identity projections on [R].
LabelCoverInstance identity_edge(std::size_t k, std::size_t R) {
  LabelCoverInstance inst;
  inst.k = k;
  inst.M = inst.N = R;
  for (std::size_t v = 0; v < k; ++v) inst.vertex_names.push_back("v" + std::to_string(v));
  Hyperedge e;
  Projection id(R);
  std::iota(id.begin(), id.end(), 0u);
  for (std::size_t v = 0; v < k; ++v) {
    e.vertices.push_back(v);
    e.projections.push_back(id);
  }
  inst.edges.push_back(e);
  return inst;
}

TEST(Reduction, IdentityInstanceReproducesDictTest) {
  const auto spec = make_test_spec(kK, kEps, kP, 5, 0.05);
  const auto inst = identity_edge(kK, 5);
  for (std::uint64_t i = 0; i < 200; ++i) {
    EXPECT_EQ(ug_reduce_sample(inst, spec, 17, i), dict_test_sample(spec, 17, i));
  }
}

TEST(Reduction, IdentityFigureTwoMatchesWithoutNoise) {
  const auto spec = make_test_spec(kK, kEps, kP, 4, 0.0);
  const auto inst = identity_edge(kK, 4);
  for (std::uint64_t i = 0; i < 100; ++i) {
    EXPECT_EQ(lc_reduce_sample(inst, spec, 3, i), dict_test_sample(spec, 3, i));
  }
}

TEST(Reduction, OffEdgeBlocksAreZero) {
  const auto pi = gen_planted_unique(30, 20, kK, 4, 5);
  const auto spec = make_test_spec(kK, kEps, kP, 4, 0.1);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto ex = ug_reduce_sample(pi.instance, spec, 9, i);
    std::vector<char> on(30, 0);
    // Recover the edge from the same substream the sampler uses.
    RngCursor er(9, substream(kEdgeStream, i));
    for (auto v : pi.instance.edges[er.below(pi.instance.edges.size())].vertices) on[v] = 1;
    for (std::size_t v = 0; v < 30; ++v) {
      if (on[v]) continue;
      for (std::size_t j = 0; j < 4; ++j) EXPECT_FALSE(ex.features.at(v, j));
    }
  }
}

TEST(Reduction, LabelIsFairCoin) {
  const auto spec = make_test_spec(kK, kEps, kP, 2, 0.0);
  std::uint64_t ones = 0;
  const std::uint64_t n = 20000;
  for (std::uint64_t i = 0; i < n; ++i) ones += dict_test_sample(spec, 1, i).label;
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 4.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST(Reduction, ShapeErrors) {
  const auto spec = make_test_spec(kK, kEps, kP, 4, 0.0);
  EXPECT_THROW(ug_reduce_sample(identity_edge(kK, 5), spec, 1, 0), DimensionError);
  EXPECT_THROW(ug_reduce_sample(identity_edge(3, 4), spec, 1, 0), DimensionError);
  const auto proj = gen_planted_projection(20, 5, kK, 8, 4, 2, 1);
  EXPECT_THROW(ug_reduce_sample(proj.instance, make_test_spec(kK, kEps, kP, 4, 0.0), 1, 0), DimensionError);
  EXPECT_THROW(lc_reduce_sample(proj.instance, make_test_spec(kK, kEps, kP, 8, 0.0), 1, 0), DimensionError);
  EXPECT_THROW(sample_stream(SamplerKind::kUniqueReduction, spec, nullptr, 1, 3), PreconditionError);
}

TEST(Reduction, CollidingLabelsDisagreeOnlyThroughNoise) {
  // Two labels with the same projection agree before noise; with independent
  // gamma-noise they differ with probability gamma - gamma^2 / 2.
  const double gamma = 0.2;
  const auto proj = gen_planted_projection(kK, 1, kK, 8, 4, 2, 7);
  const auto& inst = proj.instance;
  const auto spec = make_test_spec(kK, kEps, kP, 4, gamma);
  const auto& e = inst.edges[0];
  const Projection& p0 = e.projections[0];
  std::size_t j1 = 0, j2 = 0;
  for (std::size_t a = 0; a < 8 && j2 == 0; ++a) {
    for (std::size_t b = a + 1; b < 8; ++b) {
      if (p0[a] == p0[b]) {
        j1 = a;
        j2 = b;
        break;
      }
    }
  }
  ASSERT_NE(j2, 0u);
  const std::uint64_t n = 40000;
  std::uint64_t differ = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto ex = lc_reduce_sample_on_edge(inst, spec, 0, 4, i);
    differ += ex.features.at(e.vertices[0], j1) != ex.features.at(e.vertices[0], j2);
  }
  const double expected = gamma - gamma * gamma / 2;
  const double rate = static_cast<double>(differ) / n;
  EXPECT_NEAR(rate, expected, 4.0 * std::sqrt(expected * (1 - expected) / n));
  EXPECT_LE(rate, 2 * gamma);
}

TEST(Reduction, BlockMeanMatchesForBothLabels) {
  const auto spec = make_test_spec(kK, kEps, kP, 6, default_gamma(kK));
  EXPECT_NEAR(block_coordinate_mean(spec, 0), block_coordinate_mean(spec, 1), 1e-12);
  // Clean mean of D1 is (1 - eps)/k + (eps/4) * p * (1 + 2 + 3 + 4).
  const double m1 = (1 - kEps) / kK + kEps / 4 * kP * 10;
  const double g = spec.gamma;
  EXPECT_NEAR(block_coordinate_mean(spec, 1), (1 - g) * m1 + g / 2, 1e-12);
}

TEST(Reduction, PlantedDisjunctionMatchesClosedForm) {
  const auto pi = gen_planted_unique(40, 30, kK, 6, 12);
  const auto spec = make_test_spec(kK, kEps, kP, 6, 0.1);
  const Disjunction d = planted_disjunction(pi.labeling, 6);
  const double closed = dictator_or_acceptance(spec);
  const std::uint64_t n = 30000;
  for (auto kind : {SamplerKind::kUniqueReduction, SamplerKind::kLabelCoverReduction}) {
    const auto xs = sample_stream(kind, spec, &pi.instance, 8, n, 2);
    std::uint64_t agree = 0;
    for (const auto& ex : xs) agree += d.eval(ex.features) == ex.label;
    EXPECT_NEAR(static_cast<double>(agree) / n, closed, 4.0 * std::sqrt(closed * (1 - closed) / n));
  }
}

TEST(Reduction, AcceptanceClosedFormOracle) {
  // Independent evaluation through the column point masses at k = 12.
  const auto spec = make_test_spec(kK, kEps, kP, 3, 0.05);
  const double z0 = spec.noisy0.point_mass(0);
  const double z1 = spec.noisy1.point_mass(0);
  EXPECT_NEAR(dictator_or_acceptance(spec), 0.5 * z0 + 0.5 * (1 - z1), 1e-12);
}

TEST(Reduction, StreamIndependentOfWorkers) {
  const auto pi = gen_planted_projection(30, 25, kK, 8, 4, 2, 3);
  const auto spec = make_test_spec(kK, kEps, kP, 4, 0.05);
  const auto a = sample_stream(SamplerKind::kLabelCoverReduction, spec, &pi.instance, 6, 500, 1);
  const auto b = sample_stream(SamplerKind::kLabelCoverReduction, spec, &pi.instance, 6, 500, 3);
  EXPECT_EQ(a, b);
  const auto c = sample_stream(SamplerKind::kDictTest, spec, nullptr, 6, 500, 1);
  const auto d = sample_stream(SamplerKind::kDictTest, spec, nullptr, 6, 500, 4);
  EXPECT_EQ(c, d);
  for (std::uint64_t i = 0; i < 500; i += 97) EXPECT_EQ(c[i], dict_test_sample(spec, 6, i));
}

TEST(Reduction, DecodeRecoversPlantedLabeling) {
  const auto pi = gen_planted_projection(25, 40, 3, 6, 3, 2, 2);
  const Halfspace h = disjunction_halfspace(planted_disjunction(pi.labeling, 6), 25, 6);
  RngCursor rng(1, 0);
  EXPECT_EQ(decode_labeling(h, {1, 0.1, 1}, rng), pi.labeling);
  const auto r = weak_sat_rate_of_decoder(h, {1, 0.1, 1}, pi.instance, 5, 3);
  EXPECT_DOUBLE_EQ(r.rate.rate, 1.0);
  for (std::size_t e = 0; e < pi.instance.edges.size(); ++e) {
    EXPECT_DOUBLE_EQ(edge_weak_sat_probability(h, 1, pi.instance, e), 1.0);
  }
}

TEST(Reduction, ZeroBlockDecodesUniformly) {
  const Halfspace h(2, 4, std::vector<double>(8, 0.0), 0.0);
  RngCursor rng(2, 0);
  std::vector<int> seen(4, 0);
  for (int i = 0; i < 400; ++i) ++seen[decode_labeling(h, {1, 0.1, 1}, rng)[0]];
  for (int c : seen) EXPECT_GT(c, 50);
}

TEST(Reduction, ExactEdgeWeakSat) {
  LabelCoverInstance inst;
  inst.k = 2;
  inst.M = 3;
  inst.N = 3;
  inst.vertex_names = {"a", "b"};
  inst.edges.push_back({{0, 1}, {{0, 1, 2}, {0, 1, 2}}});
  // Tops at t = 2: vertex a -> {0, 1}, vertex b -> {1, 2}. Only (1, 1) collides.
  const Halfspace h(2, 3, {3, 2, 1, 1, 3, 2}, 0.0);
  EXPECT_DOUBLE_EQ(edge_weak_sat_probability(h, 2, inst, 0), 0.25);
  EXPECT_GE(edge_weak_sat_probability(h, 2, inst, 0), 1.0 / 4);
  EXPECT_FALSE(disjoint_tops(h, inst, 0, 2));
  EXPECT_TRUE(disjoint_tops(h, inst, 0, 1));
  EXPECT_DOUBLE_EQ(edge_weak_sat_probability(h, 1, inst, 0), 0.0);
  // Monte Carlo through the sampling decoder agrees with the enumeration.
  const auto r = weak_sat_rate_of_decoder(h, {2, 0.1, 1}, inst, 4000, 5);
  EXPECT_NEAR(r.rate.rate, 0.25, 4 * std::sqrt(0.25 * 0.75 / 4000));
}

TEST(Reduction, RepeatedVertexNeverSatisfiesItself) {
  LabelCoverInstance inst;
  inst.k = 2;
  inst.M = inst.N = 2;
  inst.vertex_names = {"a"};
  inst.edges.push_back({{0, 0}, {{0, 1}, {0, 1}}});
  const Halfspace h(1, 2, {1, 0.5}, 0.0);
  EXPECT_DOUBLE_EQ(edge_weak_sat_probability(h, 2, inst, 0), 0.0);
  EXPECT_TRUE(disjoint_tops(h, inst, 0, 2));
}

TEST(Reduction, NicenessUniqueWithinTauSquared) {
  RngCursor rng(31, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng.below(30);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.normal() * std::pow(2.0, -static_cast<double>(rng.below(6)));
    Projection id(n);
    std::iota(id.begin(), id.end(), 0u);
    for (double tau : {0.3, 0.5, 0.8}) {
      EXPECT_LE(niceness_value(w, tau, id, n), tau * tau + 1e-12);
    }
  }
}

TEST(Reduction, NicenessTwoCoordinateCases) {
  const std::vector<double> w = {1.0, 1.0};
  // Regular at tau = 0.8, so nothing is removed.
  EXPECT_DOUBLE_EQ(niceness_value(w, 0.8, {0, 1}, 2), 0.5);
  EXPECT_DOUBLE_EQ(niceness_value(w, 0.8, {0, 0}, 1), 4.0);
  EXPECT_TRUE(is_beta_nice(w, 0.8, {0, 1}, 2, 0.5));
  EXPECT_FALSE(is_beta_nice(w, 0.8, {0, 0}, 1, 0.5));
  EXPECT_DOUBLE_EQ(niceness_value({0.0, 0.0}, 0.5, {0, 1}, 2), 0.0);
  EXPECT_THROW(niceness_value(w, 0.8, {0}, 2), DimensionError);
}

TEST(Reduction, EdgeNicenessAuditOnUnique) {
  const auto pi = gen_planted_unique(15, 20, 3, 8, 4);
  RngCursor rng(2, 0);
  std::vector<double> w(15 * 8);
  for (auto& x : w) x = rng.normal();
  const Halfspace h(15, 8, w, 0.0);
  const double tau = 0.6;
  EXPECT_DOUBLE_EQ(edge_niceness_audit(pi.instance, h, tau, tau * tau), 1.0);
  // The critical-set reading removes one more coordinate, so it is only bounded by 1.
  EXPECT_LE(edge_niceness_audit(pi.instance, h, tau, tau * tau, RegularizingReading::kCriticalSet), 1.0);
}

TEST(Reduction, Presets) {
  EXPECT_DOUBLE_EQ(tau_dict_preset(2), 1.0 / 128);
  EXPECT_DOUBLE_EQ(tau_label_cover_preset(2), 1.0 / 8192);
  const double tau = 0.5;
  const double expected = (std::ceil(16 * std::log(4.0)) * std::ceil(4 * std::log(2.0)) + std::log(2.0) +
                           10 * std::log(3.0)) / 0.25;
  EXPECT_DOUBLE_EQ(t_label_cover_preset(2, tau, 3), expected);
}

TEST(Reduction, PlantedDisjunctionLiterals) {
  const Disjunction d = planted_disjunction({2, 0, 1}, 3);
  EXPECT_EQ(d.literals, (std::vector<std::size_t>{2, 3, 7}));
  EXPECT_EQ(d.dim, 9u);
  EXPECT_THROW(planted_disjunction({3}, 3), DimensionError);
}

}  // namespace
}  // namespace glhs
