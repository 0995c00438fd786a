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

// Exact checks of the invariance principle on finite-support ensembles.

#ifndef GLHS_INVARIANCE_HPP_
#define GLHS_INVARIANCE_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "glhs/moments.hpp"

namespace glhs {

struct Atom {
  double prob = 0.0;
  std::vector<double> values;
};

class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::size_t vars, std::vector<Atom> support);

  std::size_t vars() const { return vars_; }
  const std::vector<Atom>& support() const { return support_; }
  // E[prod_{i in S} X_i] for a multiset S.
  double moment(const std::vector<std::size_t>& S) const;

 private:
  std::size_t vars_ = 0;
  std::vector<Atom> support_;
};

using EnsembleFamily = std::vector<Ensemble>;
using BlockWeights = std::vector<std::vector<double>>;

inline constexpr std::size_t kEnumerationGuard = 10'000'000;

struct MomentMatch {
  bool match = true;
  std::vector<std::size_t> violating;  // first multiset whose moments differ
  double worst = 0.0;
};

MomentMatch compare_moments(const Ensemble& A, const Ensemble& B, std::size_t degree);
bool matching_moments(const Ensemble& A, const Ensemble& B, std::size_t degree);

// Marginal of the first m coordinates of a (noisy) mixture, values in {0,1}.
Ensemble marginal_ensemble(const NoisySource& src, std::size_t m);
Ensemble marginal_ensemble(const ColumnMixture& src, std::size_t m);

// Phi_lambda(t) = S((t + lambda) / (2 lambda)) with the degree-9 bridge
// S(u) = 126u^5 - 420u^6 + 540u^7 - 315u^8 + 70u^9, clamped to 0/1 outside.
class SmoothSign {
 public:
  explicit SmoothSign(double lambda);

  double lambda() const { return lambda_; }
  double operator()(double t) const { return derivative(t, 0); }
  double derivative(double t, int order) const;
  // max |S''''| / 16, so that K = c_phi / lambda^4.
  double c_phi() const { return c_phi_; }
  double K() const { return c_phi_ / (lambda_ * lambda_ * lambda_ * lambda_); }
  const std::vector<double>& bridge() const;

 private:
  double lambda_;
  double c_phi_;
};

SmoothSign smooth_sign(double lambda);

using Psi = std::function<double(double)>;

// Calls fn(prob, l(x)) for every point of the product support.
void enumerate_linear_form(const EnsembleFamily& F, const BlockWeights& l,
                           const std::function<void(double, double)>& fn);

double expect_psi(const EnsembleFamily& F, const BlockWeights& l, double theta, const Psi& psi);

double sum_l1_fourth(const BlockWeights& l);

struct GapReport {
  double gap = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Requires degree-3 matching per index (PreconditionError names the multiset).
GapReport invariance_gap(const EnsembleFamily& A, const EnsembleFamily& B, const BlockWeights& l, double theta,
                         const Psi& psi, double K);

struct HybridReport {
  std::vector<double> steps;        // E psi(X_{i-1}) - E psi(X_i), i = 1..R
  std::vector<double> step_bounds;  // (K/12) ||l_i||_1^4
  double total = 0.0;               // E_A psi - E_B psi
};

// X_i = (B_1..B_i, A_{i+1}..A_R).
HybridReport hybrid_steps(const EnsembleFamily& A, const EnsembleFamily& B, const BlockWeights& l, double theta,
                          const Psi& psi, double K);

// max over theta' of Pr[l in [theta' - alpha, theta' + alpha]] (exact).
double spread_function(const EnsembleFamily& F, const BlockWeights& l, double alpha);

struct SgnGapReport {
  double gap = 0.0;
  double bound = 0.0;
  double c_alpha = 0.0;
  bool pass = false;
};

SgnGapReport sgn_gap_bound(const EnsembleFamily& A, const EnsembleFamily& B, const BlockWeights& l, double theta,
                           double alpha);

}  // namespace glhs

#endif  // GLHS_INVARIANCE_HPP_
