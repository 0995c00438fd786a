#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>

#include "glhs/core.hpp"
#include "glhs/harness.hpp"
#include "glhs/stream.hpp"

namespace glhs {
namespace {

constexpr std::size_t kK = 12;

std::vector<LabeledExample> dict_examples(std::size_t R, double gamma, std::uint64_t n, std::uint64_t seed) {
  const auto spec = make_test_spec(kK, 0.8, 0.25, R, gamma);
  return sample_stream(SamplerKind::kDictTest, spec, nullptr, seed, n, 1);
}

TEST(Harness, ConstantZeroRateIsZeroLabelFraction) {
  const auto xs = dict_examples(3, 0.05, 2000, 4);
  std::uint64_t zeros = 0;
  for (const auto& ex : xs) zeros += ex.label == 0;
  const auto r = agreement(Hypothesis::constant(0, "const0"), xs);
  EXPECT_EQ(r.rate.hits, zeros);
  EXPECT_EQ(r.label_counts[0], zeros);
  EXPECT_EQ(r.fires[0] + r.fires[1], 0u);
}

TEST(Harness, ComplementSumsToOne) {
  const auto xs = dict_examples(4, 0.05, 3000, 5);
  const auto h = Hypothesis::from_halfspace(gaussian_halfspace(kK, 4, 9), "g");
  const auto a = agreement(h, xs);
  const auto b = agreement(h.negated(), xs);
  EXPECT_EQ(a.rate.hits + b.rate.hits, xs.size());
  EXPECT_EQ(h.negated().id(), "g!");
}

TEST(Harness, WeightedIdentityIsExact) {
  const auto xs = dict_examples(5, 0.05, 5000, 6);
  const auto spec = make_test_spec(kK, 0.8, 0.25, 5, 0.05);
  const auto h = Hypothesis::from_halfspace(centered_majority(spec), "maj");
  const auto r = agreement(h, xs);
  EXPECT_NEAR(r.weighted_identity(), r.rate.rate, 1e-12);
  // The balanced form differs only through the label imbalance.
  EXPECT_NEAR(r.balanced_identity(), r.rate.rate, 0.05);
}

TEST(Harness, AgreementIndependentOfWorkers) {
  const auto xs = dict_examples(4, 0.1, 4000, 7);
  const auto h = Hypothesis::from_halfspace(gaussian_halfspace(kK, 4, 3), "g");
  const auto a = agreement(h, xs, "", 1);
  const auto b = agreement(h, xs, "", 3);
  EXPECT_EQ(a.rate.hits, b.rate.hits);
  EXPECT_EQ(a.fires, b.fires);
}

TEST(Harness, DimensionMismatch) {
  const auto xs = dict_examples(4, 0.0, 10, 1);
  const auto h = Hypothesis::from_halfspace(gaussian_halfspace(kK, 5, 1), "g");
  EXPECT_THROW(agreement(h, xs), DimensionError);
  EXPECT_NO_THROW(agreement(Hypothesis::constant(1, "c"), xs));
}

TEST(Harness, PerceptronLearnsAnd) {
  // Label = x0 AND x1 over a 1 x 3 grid; every point repeated.
  std::vector<LabeledExample> xs;
  for (int rep = 0; rep < 5; ++rep) {
    for (unsigned m = 0; m < 8; ++m) {
      LabeledExample ex;
      ex.features = BitMatrix(1, 3);
      for (unsigned j = 0; j < 3; ++j) ex.features.set(0, j, (m >> j) & 1u);
      ex.label = (m & 3u) == 3u;
      xs.push_back(ex);
    }
  }
  LearnerConfig cfg;
  cfg.epochs = 50;
  const Halfspace h = perceptron_train(xs, cfg);
  EXPECT_DOUBLE_EQ(agreement(Hypothesis::from_halfspace(h, "p"), xs).rate.rate, 1.0);
  cfg.averaged = false;
  const Halfspace raw = perceptron_train(xs, cfg);
  EXPECT_DOUBLE_EQ(agreement(Hypothesis::from_halfspace(raw, "p"), xs).rate.rate, 1.0);
}

TEST(Harness, PerceptronEdgeCases) {
  EXPECT_THROW(perceptron_train({}, LearnerConfig{}), PreconditionError);
  std::vector<LabeledExample> xs(20);
  for (auto& ex : xs) {
    ex.features = BitMatrix(2, 2);
    ex.label = 1;
  }
  xs[3].features.set(1, 1, true);
  const Halfspace h = perceptron_train(xs, LearnerConfig{});
  EXPECT_DOUBLE_EQ(agreement(Hypothesis::from_halfspace(h, "p"), xs).rate.rate, 1.0);
  // Deterministic given the shuffle seed.
  const auto ys = dict_examples(3, 0.05, 500, 2);
  EXPECT_EQ(perceptron_train(ys, LearnerConfig{}).weights, perceptron_train(ys, LearnerConfig{}).weights);
}

TEST(Harness, ColumnSumDistributionNormalised) {
  const auto spec = make_test_spec(kK, 0.8, 0.25, 2, 0.1);
  for (int b : {0, 1}) {
    const auto dist = column_sum_distribution(spec.noisy(b));
    ASSERT_EQ(dist.size(), kK + 1);
    double total = 0.0, mean = 0.0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      EXPECT_GE(dist[s], -1e-15);
      total += dist[s];
      mean += s * dist[s];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(mean, kK * spec.noisy(b).set_moment(1), 1e-12);
    EXPECT_NEAR(dist[0], spec.noisy(b).prob_all_zero(), 1e-12);
  }
}

TEST(Harness, MajorityFireProbabilityMatchesSampling) {
  const auto spec = make_test_spec(kK, 0.8, 0.25, 3, 0.05);
  const Halfspace maj = centered_majority(spec);
  const std::uint64_t n = 20000;
  const auto xs = sample_stream(SamplerKind::kDictTest, spec, nullptr, 12, n, 1);
  for (int b : {0, 1}) {
    const double exact = majority_fire_probability(spec, b, maj.theta);
    std::uint64_t fires = 0, count = 0;
    for (const auto& ex : xs) {
      if (ex.label != b) continue;
      ++count;
      fires += maj.eval(ex.features);
    }
    const double rate = static_cast<double>(fires) / count;
    EXPECT_NEAR(rate, exact, 4 * std::sqrt(exact * (1 - exact) / count) + 1.0 / count);
  }
}

TEST(Harness, AgreementFileMatchesInMemory) {
  const auto spec = make_test_spec(kK, 0.8, 0.25, 3, 0.05);
  const auto xs = sample_stream(SamplerKind::kDictTest, spec, nullptr, 3, 800, 1);
  const std::string path = ::testing::TempDir() + "harness_stream.glhs";
  StreamHeader header;
  header.rows = kK;
  header.cols = 3;
  write_stream(path, header, xs);
  const auto h = Hypothesis::from_halfspace(gaussian_halfspace(kK, 3, 4), "g");
  EXPECT_EQ(agreement_file(h, path).rate.hits, agreement(h, xs).rate.hits);
  std::remove(path.c_str());
}

TEST(Harness, PlanJsonRoundTrip) {
  ExperimentPlan plan;
  plan.k = 20;
  plan.eps = 0.7;
  plan.samples = 123;
  plan.lemmas = false;
  const auto back = plan_from_json(plan_to_json(plan));
  EXPECT_EQ(back.k, 20u);
  EXPECT_DOUBLE_EQ(back.eps, 0.7);
  EXPECT_EQ(back.samples, 123u);
  EXPECT_FALSE(back.lemmas);
}

TEST(Harness, SmallExperimentPasses) {
  ExperimentPlan plan;
  plan.k = 12;
  plan.R = 4;
  plan.samples = 4000;
  plan.num_vertices = 20;
  plan.num_edges = 15;
  plan.decode_trials = 3;
  const auto records = run_experiment(plan);
  ASSERT_FALSE(records.empty());
  bool saw_exploratory = false;
  for (const auto& r : records) {
    EXPECT_FALSE(r.failed()) << r.check << " stat=" << r.statistic << " bound=" << r.bound;
    saw_exploratory = saw_exploratory || r.status == "exploratory";
  }
  EXPECT_TRUE(saw_exploratory);
}

}  // namespace
}  // namespace glhs
