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

#ifndef GLHS_CONCENTRATION_HPP_
#define GLHS_CONCENTRATION_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "glhs/core.hpp"
#include "glhs/moments.hpp"
#include "glhs/stats.hpp"

namespace glhs {

struct IntervalQuery {
  double a = 0.0;
  double b = 0.0;

  IntervalQuery() = default;
  IntervalQuery(double lo, double hi);
  bool contains(double x) const { return x >= a && x <= b; }
  double length() const { return b - a; }
};

// A base distribution D over {0,1}^n for the lemma catalog.
struct BaseDistribution {
  std::string name;
  std::size_t n = 0;
  std::function<void(RngCursor&, BitVector&)> sample;
};

BaseDistribution point_mass_distribution(const BitVector& x, std::string name = "point");
BaseDistribution product_distribution(std::size_t n, double q);
BaseDistribution mixture_distribution(const ColumnMixture& m, std::string name);

// |w_1| >= ... >= |w_T| >= 0 and |w_{i+1}| <= |w_i| / 3. Throws
// PreconditionError naming the first failing ratio.
void check_geometric_vector(const std::vector<double>& w);

inline constexpr std::size_t kSmallBallGuard = 24;

// Number of x in {0,1}^T with <w, x> in I. Requires |I| <= |w_T| / 3.
std::size_t unique_point_in_interval(const std::vector<double>& w, const IntervalQuery& I);

// The point of {0,1}^T whose weighted sum is closest to alpha (exhaustive).
BitVector nearest_subset_point(const std::vector<double>& w, double alpha);

struct LemmaEstimate {
  Proportion estimate;
  double bound = 0.0;
  bool pass = false;
};

// Pr[<w, y> in [theta - |w_T|/6, theta + |w_T|/6]] with y the gamma-noisy
// version of x ~ D. Bound (1 - gamma/2)^T, asserted one-sided with 4 sigma.
LemmaEstimate noisy_small_ball(const std::vector<double>& w, const BaseDistribution& D, double gamma,
                               double theta, std::size_t trials, std::uint64_t seed);

double spread_bound(double gamma, double tau, double width);

// Pr[<w, y> in [a, b]] for a tau-regular unit w.
LemmaEstimate spread_estimate(const std::vector<double>& w, double tau, const BaseDistribution& D,
                              double gamma, const IntervalQuery& I, std::size_t trials, std::uint64_t seed);

// Pr[sum w_i^2 z_i >= gamma/2] for z_i ~ Bernoulli(gamma), against the lower
// bound 1 - 2 exp(-gamma^2 / (2 tau^2)); pass iff estimate >= bound - 4 sigma.
LemmaEstimate variance_claim_estimate(const std::vector<double>& w, double tau, double gamma,
                                      std::size_t trials, std::uint64_t seed);

// 2 exp(-n^2 t^2 / sum (b_i - a_i)^2), the form used in the analysis.
double hoeffding_tail(std::size_t n, const std::vector<double>& ranges, double t);
// Pr[|X - mu| >= t sigma] <= 1 / t^2.
double chebyshev_tail(double t);

inline constexpr std::size_t kBerryEsseenExhaustive = 20;

// sup_t |Pr[sum c_i x_i <= t] - Phi(t)| for uniform x in {-1,1}^n. Exhaustive
// for n <= 20, Monte Carlo over `trials` samples otherwise.
double berry_esseen_gap(const std::vector<double>& c, std::size_t trials = 0, std::uint64_t seed = 0);

struct GeometricSubsequence {
  std::vector<std::size_t> positions;  // 1-based ranks in the descending order
  std::vector<std::size_t> indices;    // coordinates
  std::size_t step = 0;
  bool ratios_ok = true;
};

// G = {1 + i * ceil((4/tau^2) ln(1/tau)) : 0 <= i <= T}.
GeometricSubsequence geometric_subsequence(const std::vector<double>& w, double tau, std::size_t T);

}  // namespace glhs

#endif  // GLHS_CONCENTRATION_HPP_
