#include <gtest/gtest.h>

#include <cmath>

#include "glhs/invariance.hpp"
#include "glhs/moments.hpp"

namespace glhs {
namespace {

struct Families {
  EnsembleFamily A, B;
};

Families gadget_families(std::size_t R, std::size_t m, double gamma) {
  const auto g = build_pair(12, 0.8, 0.25);
  return {EnsembleFamily(R, marginal_ensemble(NoisySource(g.d0, gamma), m)),
          EnsembleFamily(R, marginal_ensemble(NoisySource(g.d1, gamma), m))};
}

BlockWeights random_blocks(RngCursor& rng, std::size_t R, std::size_t m, double scale) {
  BlockWeights l(R, std::vector<double>(m));
  for (auto& b : l)
    for (auto& x : b) x = rng.normal() * scale;
  return l;
}

TEST(Ensemble, MarginalMomentsMatchClosedForm) {
  const auto g = build_pair(12, 0.8, 0.25);
  const NoisySource src(g.d1, 0.05);
  const Ensemble e = marginal_ensemble(src, 4);
  for (const std::vector<std::size_t>& S :
       {std::vector<std::size_t>{0}, {0, 1}, {1, 2, 3}, {0, 1, 2, 3}, {2, 2}}) {
    EXPECT_NEAR(e.moment(S), exact_moment(src, S), 1e-12);
  }
  double total = 0.0;
  for (const auto& a : e.support()) total += a.prob;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Ensemble, CompareMomentsFindsViolation) {
  const Ensemble coin(1, {{0.5, {0.0}}, {0.5, {1.0}}});
  const Ensemble biased(1, {{0.4, {0.0}}, {0.6, {1.0}}});
  const auto m = compare_moments(coin, biased, 3);
  EXPECT_FALSE(m.match);
  EXPECT_EQ(m.violating, std::vector<std::size_t>{0});
  EXPECT_TRUE(matching_moments(coin, coin, 4));
}

TEST(SmoothSign, BoundaryValuesAndMonotone) {
  const SmoothSign phi(0.2);
  EXPECT_EQ(phi(-0.2), 0.0);
  EXPECT_EQ(phi(0.2), 1.0);
  EXPECT_NEAR(phi(0.0), 0.5, 1e-12);
  double prev = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double v = phi(-0.2 + 0.4 * i / 400);
    EXPECT_GE(v, prev - 1e-15);
    prev = v;
  }
  EXPECT_THROW(SmoothSign(0.6), DomainError);
}

TEST(SmoothSign, DerivativesMatchFiniteDifferences) {
  const SmoothSign phi(0.25);
  const double h = 1e-5;
  for (double t : {-0.2, -0.05, 0.1, 0.2}) {
    for (int order = 1; order <= 4; ++order) {
      const double fd = (phi.derivative(t + h, order - 1) - phi.derivative(t - h, order - 1)) / (2 * h);
      EXPECT_NEAR(phi.derivative(t, order), fd, 1e-4 * (1 + std::fabs(fd))) << "t=" << t << " order=" << order;
    }
  }
}

TEST(SmoothSign, CPhiMatchesDenseGrid) {
  // S''''(u) = 15120u - 151200u^2 + 453600u^3 - 529200u^4 + 211680u^5.
  double best = 0.0;
  for (int i = 0; i <= 1000000; ++i) {
    const double u = i / 1e6;
    const double v = 15120 * u - 151200 * u * u + 453600 * std::pow(u, 3) - 529200 * std::pow(u, 4) +
                     211680 * std::pow(u, 5);
    best = std::max(best, std::fabs(v));
  }
  const SmoothSign phi(0.1);
  EXPECT_NEAR(phi.c_phi(), best / 16, best / 16 * 1e-9);
  EXPECT_GE(phi.c_phi(), best / 16);
  EXPECT_NEAR(phi.K(), phi.c_phi() / 1e-4, 1e-6 * phi.K());
}

TEST(Invariance, CubicGapIsZero) {
  RngCursor rng(1, 0);
  const auto f = gadget_families(3, 3, 0.01);
  for (int t = 0; t < 10; ++t) {
    const auto l = random_blocks(rng, 3, 3, 0.5);
    const auto r = invariance_gap(f.A, f.B, l, 0.1, [](double x) { return x * x * x - x; }, 0.0);
    EXPECT_LE(r.gap, 1e-12);
  }
}

TEST(Invariance, QuarticGapWithinBound) {
  RngCursor rng(2, 0);
  const auto f = gadget_families(4, 3, 0.01);
  for (int t = 0; t < 10; ++t) {
    const auto l = random_blocks(rng, 4, 3, 0.5);
    const auto r = invariance_gap(f.A, f.B, l, 0.0, [](double x) { return x * x * x * x; }, 24.0);
    EXPECT_TRUE(r.pass) << r.gap << " > " << r.bound;
    EXPECT_GT(r.gap, 0.0);
  }
}

TEST(Invariance, HybridStepsTelescope) {
  RngCursor rng(3, 0);
  const auto f = gadget_families(4, 2, 0.0);
  const auto l = random_blocks(rng, 4, 2, 1.0);
  const auto h = hybrid_steps(f.A, f.B, l, 0.3, [](double x) { return x * x * x * x; }, 24.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < h.steps.size(); ++i) {
    sum += h.steps[i];
    EXPECT_LE(std::fabs(h.steps[i]), h.step_bounds[i] + 1e-9);
  }
  EXPECT_NEAR(sum, h.total, 1e-9);
}

TEST(Invariance, RequiresMatchingMoments) {
  const Ensemble coin(1, {{0.5, {0.0}}, {0.5, {1.0}}});
  const Ensemble biased(1, {{0.4, {0.0}}, {0.6, {1.0}}});
  EXPECT_THROW(invariance_gap({coin}, {biased}, {{1.0}}, 0.0, [](double x) { return x; }, 1.0),
               PreconditionError);
}

TEST(Invariance, SpreadFunctionSingleCoin) {
  const Ensemble coin(1, {{0.5, {0.0}}, {0.5, {1.0}}});
  EXPECT_DOUBLE_EQ(spread_function({coin}, {{1.0}}, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(spread_function({coin, coin}, {{1.0}, {1.0}}, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(spread_function({coin, coin}, {{1.0}, {0.1}}, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(spread_function({coin, coin}, {{1.0}, {0.4}}, 0.2), 0.5);
  EXPECT_DOUBLE_EQ(spread_function({coin, coin}, {{1.0}, {0.4}}, 0.3), 0.5);
  EXPECT_DOUBLE_EQ(spread_function({coin, coin}, {{1.0}, {0.1}}, 0.5), 0.75);
}

TEST(Invariance, SgnGapBound) {
  RngCursor rng(4, 0);
  const auto f = gadget_families(3, 3, 0.01);
  for (int t = 0; t < 5; ++t) {
    const auto l = random_blocks(rng, 3, 3, 0.3);
    const auto r = sgn_gap_bound(f.A, f.B, l, 0.05, 0.2);
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.c_alpha, 0.0);
    EXPECT_LE(r.c_alpha, 1.0);
  }
}

TEST(Invariance, EnumerationGuard) {
  const auto f = gadget_families(7, 8, 0.01);  // 256^7 points
  BlockWeights l(7, std::vector<double>(8, 1.0));
  EXPECT_THROW(expect_psi(f.A, l, 0.0, [](double x) { return x; }), GuardError);
}

}  // namespace
}  // namespace glhs
