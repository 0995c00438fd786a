#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "glhs/moments.hpp"

namespace glhs {
namespace {

// Independent oracle: explicit law of (D0, D1) on {0,1}^k from the weights.
struct OraclePair {
  std::size_t k;
  double eps, p;
  std::array<double, 4> w;  // eps_1..eps_4

  double mass(int b, std::uint32_t x) const {
    const int ones = std::popcount(x);
    const int zeros = static_cast<int>(k) - ones;
    double m = 0.0;
    auto pb = [&](double q) { return std::pow(q, ones) * std::pow(1 - q, zeros); };
    if (b == 1) {
      if (ones == 1) m += (1 - eps) / static_cast<double>(k);
      for (int i = 1; i <= 4; ++i) m += eps / 4 * pb(i * p);
    } else {
      double used = 0.0;
      for (int i = 1; i <= 4; ++i) {
        m += w[i - 1] * pb(i * p);
        used += w[i - 1];
      }
      if (ones == 0) m += 1 - used;
    }
    return m;
  }

  // Law of the gamma-noisy column: y_i = x_i w.p. 1 - gamma, else a fair bit.
  double noisy_mass(int b, std::uint32_t y, double gamma) const {
    double total = 0.0;
    for (std::uint32_t x = 0; x < (1u << k); ++x) {
      double pr = mass(b, x);
      for (std::size_t i = 0; i < k; ++i) {
        const bool xi = (x >> i) & 1u, yi = (y >> i) & 1u;
        pr *= (xi == yi) ? 1 - gamma / 2 : gamma / 2;
      }
      total += pr;
    }
    return total;
  }
};

std::array<double, 4> oracle_weights(std::size_t k, double eps, double p) {
  const double b = (1 - eps) / (static_cast<double>(k) * p);
  return {eps / 4 + 4 * b, eps / 4 - 3 * b, eps / 4 + 4 * b / 3, eps / 4 - b / 4};
}

TEST(Moments, FrozenWeightsK12) {
  // eps_i for k=12, eps=0.8, p=0.25 are 7/15, 0, 13/45, 11/60.
  const auto w = solve_d0_weights(12, 0.8, 0.25);
  EXPECT_NEAR(w[0], 7.0 / 15, 1e-12);
  EXPECT_NEAR(w[1], 0.0, 1e-12);
  EXPECT_NEAR(w[2], 13.0 / 45, 1e-12);
  EXPECT_NEAR(w[3], 11.0 / 60, 1e-12);
}

TEST(Moments, SolverMatchesDeltaFormula) {
  for (auto [k, eps, p] : {std::tuple{12, 0.8, 0.25}, {256, 0.2, 0.1875}, {64, 0.5, 0.25}, {16, 0.8, 0.25}}) {
    const auto solved = solve_d0_weights(k, eps, p);
    const auto oracle = oracle_weights(k, eps, p);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(solved[i], oracle[i], 1e-12) << "k=" << k << " i=" << i;
    const auto res = system_residuals(k, eps, p, solved);
    for (double r : res) EXPECT_LE(std::fabs(r), 1e-12);
  }
}

TEST(Moments, GapVanishesToDegreeFour) {
  for (auto [k, eps, p] : {std::tuple{12, 0.8, 0.25}, {256, 0.2, 0.1875}}) {
    const auto g = build_pair(k, eps, p);
    EXPECT_LE(moment_gap(g.d0, g.d1, 4), 1e-9);
    const double gamma = 1.0 / (double(k) * k);
    EXPECT_LE(moment_gap(NoisySource(g.d0, gamma), NoisySource(g.d1, gamma), 4), 1e-9);
    // Degree 5 is not matched.
    EXPECT_GT(moment_gap(g.d0, g.d1, 5), 1e-9);
  }
}

TEST(Moments, ClosedFormsMatchEnumerationK12) {
  const std::size_t k = 12;
  const auto g = build_pair(k, 0.8, 0.25);
  const OraclePair o{k, 0.8, 0.25, oracle_weights(k, 0.8, 0.25)};
  for (std::size_t s = 1; s <= 5; ++s) {
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i < s; ++i) S.push_back(2 * i);
    for (int b = 0; b < 2; ++b) {
      double brute = 0.0;
      for (std::uint32_t x = 0; x < (1u << k); ++x) {
        bool all = true;
        for (auto i : S) all = all && ((x >> i) & 1u);
        if (all) brute += o.mass(b, x);
      }
      const auto& dist = b ? g.d1 : g.d0;
      EXPECT_NEAR(exact_moment(dist, S), brute, 1e-12);
      EXPECT_NEAR(enum_oracle_moment(dist, S), brute, 1e-12);
    }
  }
  EXPECT_NEAR(g.d0.prob_all_zero(), o.mass(0, 0), 1e-12);
  EXPECT_NEAR(g.d1.prob_all_zero(), o.mass(1, 0), 1e-12);
}

TEST(Moments, NoisyClosedFormsMatchChannelOracle) {
  const std::size_t k = 9;
  const double eps = 0.9, p = 0.25, gamma = 0.1;
  const auto g = build_pair(k, eps, p);
  const OraclePair o{k, eps, p, oracle_weights(k, eps, p)};
  for (int b = 0; b < 2; ++b) {
    const NoisySource src(b ? g.d1 : g.d0, gamma);
    EXPECT_NEAR(src.prob_all_zero(), o.noisy_mass(b, 0, gamma), 1e-12);
    EXPECT_NEAR(enum_oracle_all_zero(src), o.noisy_mass(b, 0, gamma), 1e-12);
    for (std::size_t s = 1; s <= 3; ++s) {
      std::vector<std::size_t> S(s);
      for (std::size_t i = 0; i < s; ++i) S[i] = i;
      double brute = 0.0;
      for (std::uint32_t y = 0; y < (1u << k); ++y) {
        if ((y & ((1u << s) - 1)) == (1u << s) - 1) brute += o.noisy_mass(b, y, gamma);
      }
      EXPECT_NEAR(exact_moment(src, S), brute, 1e-12);
    }
  }
}

TEST(Moments, ConditionalMomentsAgree) {
  const auto g = build_pair(12, 0.8, 0.25);
  for (int c = 0; c < 2; ++c) {
    const std::vector<std::size_t> S = {1, 2};
    const double a = conditional_moment(g.d0, S, 0, c);
    const double b = conditional_moment(g.d1, S, 0, c);
    EXPECT_NEAR(a, b, 1e-9) << "c=" << c;
  }
}

TEST(Moments, PaperParameterizationInfeasible) {
  // eps*k*p >= 12(1-eps) fails for the paper's choice; eps2 goes negative.
  for (std::size_t k : {8, 64, 1000, 1000000}) {
    std::string why;
    EXPECT_FALSE(pair_feasible(k, paper_eps(k), paper_p(k), &why)) << k;
    EXPECT_FALSE(why.empty());
  }
  std::string why;
  EXPECT_FALSE(pair_feasible(64, 0.125, paper_p(64), &why));
  EXPECT_NE(why.find("eps2"), std::string::npos) << why;
  EXPECT_THROW(build_pair(64, 0.125, 0.25), FeasibilityError);
}

TEST(Moments, AllZeroWeightNamedEps0) {
  std::string why;
  EXPECT_FALSE(pair_feasible(3, 0.99, 0.25, &why));
  EXPECT_NE(why.find("eps0"), std::string::npos) << why;
}

TEST(Moments, ThresholdBoundaryProperty) {
  // Property: for the (eps, p) family with AllZero weight nonnegative,
  // feasibility coincides with eps*k*p >= 12(1-eps).
  RngCursor rng(5, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 9 + rng.below(300);
    const double eps = 0.05 + 0.9 * rng.uniform();
    const double p = 0.02 + 0.23 * rng.uniform();
    const double zero_weight_slack = 1 - (eps + 25 * (1 - eps) / (12 * double(k) * p));
    if (zero_weight_slack < 1e-9) continue;
    const double margin = eps * double(k) * p - 12 * (1 - eps);
    if (std::fabs(margin) < 1e-9) continue;
    EXPECT_EQ(pair_feasible(k, eps, p), margin > 0) << k << " " << eps << " " << p;
  }
}

TEST(Moments, SamplerMatchesPointMass) {
  const std::size_t k = 10;
  const auto g = build_pair(k, 0.9, 0.25);
  const NoisySource src(g.d0, 0.05);
  // Frequency of the popcount of sampled columns against the exact law.
  std::vector<double> exact(k + 1, 0.0);
  for (std::uint32_t y = 0; y < (1u << k); ++y) exact[std::popcount(y)] += src.point_mass(y);
  const int n = 100000;
  std::vector<int> counts(k + 1, 0);
  RngCursor rng(77, 0);
  BitVector col;
  for (int i = 0; i < n; ++i) {
    sample_column(src, rng, col);
    ++counts[col.popcount()];
  }
  for (std::size_t s = 0; s <= k; ++s) {
    const double sigma = std::sqrt(exact[s] * (1 - exact[s]) / n) + 1.0 / n;
    EXPECT_NEAR(counts[s] / double(n), exact[s], 4 * sigma) << "popcount " << s;
  }
}

TEST(Moments, SamplingIsDeterministic) {
  const auto g = build_pair(16, 0.8, 0.25);
  RngCursor a(1, 2), b(1, 2);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_column(NoisySource(g.d1, 0.1), a), sample_column(NoisySource(g.d1, 0.1), b));
  }
}

TEST(Moments, EnumerationGuard) {
  const auto g = build_pair(64, 0.5, 0.25);
  EXPECT_THROW(enum_oracle_moment(g.d0, {0}), GuardError);
}

}  // namespace
}  // namespace glhs
