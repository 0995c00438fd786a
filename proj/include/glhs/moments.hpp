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

#ifndef GLHS_MOMENTS_HPP_
#define GLHS_MOMENTS_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "glhs/core.hpp"

namespace glhs {

enum class ComponentKind { kExactlyOne, kProductBernoulli, kAllZero };

struct Component {
  double weight = 0.0;
  ComponentKind kind = ComponentKind::kAllZero;
  double q = 0.0;  // ProductBernoulli rate
};

// Exchangeable distribution over {0,1}^k.
class ColumnMixture {
 public:
  ColumnMixture() = default;
  ColumnMixture(std::size_t k, std::vector<Component> components);

  std::size_t k() const { return k_; }
  const std::vector<Component>& components() const { return components_; }

  // E[prod_{i in S} x_i] for any set S with |S| = s.
  double set_moment(std::size_t s) const;
  double prob_all_zero() const;
  // Probability of one point, bit i of `x` is coordinate i. Requires k <= 20.
  double point_mass(std::uint32_t x) const;

 private:
  std::size_t k_ = 0;
  std::vector<Component> components_;
};

// Each coordinate independently replaced by a uniform bit with probability gamma.
struct NoisySource {
  ColumnMixture base;
  double gamma = 0.0;

  NoisySource() = default;
  NoisySource(ColumnMixture b, double g);

  std::size_t k() const { return base.k(); }
  // Substitution y_i -> (1 - gamma) x_i + gamma / 2, expanded binomially.
  double set_moment(std::size_t s) const;
  double prob_all_zero() const;
  double point_mass(std::uint32_t y) const;
};

inline constexpr double kWeightTolerance = 1e-12;

// eps_i = eps/4 + delta_i, delta = (4b, -3b, 4b/3, -b/4), b = (1 - eps)/(k p).
std::array<double, 4> closed_form_d0_weights(std::size_t k, double eps, double p);

// Gaussian elimination on the four moment equations
//   sum_i eps_i (i p)^m = [(1 - eps)/k] [m == 1] + sum_i (eps/4) (i p)^m,  m = 1..4.
// Throws FeasibilityError naming eps1..eps4 when a weight is negative, or eps0
// when the AllZero weight 1 - sum eps_i would be negative.
std::array<double, 4> solve_d0_weights(std::size_t k, double eps, double p);

// Residuals of the moment system for given weights, m = 1..4.
std::array<double, 4> system_residuals(std::size_t k, double eps, double p,
                                       const std::array<double, 4>& w);

struct GadgetPair {
  std::size_t k = 0;
  double eps = 0.0;
  double p = 0.0;
  std::array<double, 4> d0_weights{};
  ColumnMixture d0;
  ColumnMixture d1;

  std::string describe(double gamma) const;
};

GadgetPair build_pair(std::size_t k, double eps, double p);

double paper_eps(std::size_t k);
double paper_p(std::size_t k);

// Feasibility check without throwing; `violation` names the failing weight.
bool pair_feasible(std::size_t k, double eps, double p, std::string* violation = nullptr);

// Moment of the multiset S (duplicates collapse since x^2 = x).
double exact_moment(const ColumnMixture& dist, const std::vector<std::size_t>& S);
double exact_moment(const NoisySource& dist, const std::vector<std::size_t>& S);

// Max over set sizes 1..degree of the moment difference.
double moment_gap(const ColumnMixture& a, const ColumnMixture& b, std::size_t degree);
double moment_gap(const NoisySource& a, const NoisySource& b, std::size_t degree);

// E[prod_{i in S} x_i | x_j = c].
double conditional_moment(const ColumnMixture& dist, const std::vector<std::size_t>& S,
                          std::size_t j, int c);
double conditional_moment(const NoisySource& dist, const std::vector<std::size_t>& S,
                          std::size_t j, int c);

double prob_all_zero(const ColumnMixture& dist);
double prob_all_zero(const NoisySource& dist);

// Brute force over all 2^k points. GuardError for k > 20.
double enum_oracle_moment(const ColumnMixture& dist, const std::vector<std::size_t>& S);
double enum_oracle_moment(const NoisySource& dist, const std::vector<std::size_t>& S);
double enum_oracle_all_zero(const NoisySource& dist);

// Writes one column into `out` (length k). Component choice takes one word;
// Bernoulli and noise positions use geometric skips, one word per event.
void sample_column(const ColumnMixture& dist, RngCursor& rng, BitVector& out);
void sample_column(const NoisySource& dist, RngCursor& rng, BitVector& out);
BitVector sample_column(const NoisySource& dist, RngCursor& rng);

// Replaces each bit of `bits` with a uniform bit with probability gamma.
void apply_noise(BitVector& bits, double gamma, RngCursor& rng);

// Calls fn(i) for each i in [0, n) where a Bernoulli(q) trial succeeds.
template <typename Fn>
void for_each_success(std::size_t n, double q, RngCursor& rng, Fn&& fn);

// Shared sampler behind sample_column: set(i, bit) writes into a column that
// starts all-zero. Noise positions are drawn after the clean column.
template <typename Set>
void sample_column_into(const ColumnMixture& dist, double gamma, RngCursor& rng, Set&& set);

}  // namespace glhs

#include "glhs/moments_inl.hpp"

#endif  // GLHS_MOMENTS_HPP_
