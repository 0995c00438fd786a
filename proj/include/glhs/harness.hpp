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

#ifndef GLHS_HARNESS_HPP_
#define GLHS_HARNESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "glhs/core.hpp"
#include "glhs/halfspace.hpp"
#include "glhs/reduction.hpp"
#include "glhs/report.hpp"
#include "glhs/stats.hpp"

namespace glhs {

struct ConstantHypothesis {
  std::uint8_t value = 0;
};

class Hypothesis {
 public:
  static Hypothesis from_halfspace(Halfspace h, std::string id);
  static Hypothesis from_disjunction(Disjunction d, std::string id);
  static Hypothesis constant(std::uint8_t value, std::string id);

  // Pointwise complement, id suffixed with "!".
  Hypothesis negated() const;

  const std::string& id() const { return id_; }
  // 0 for constants, which accept any shape.
  std::size_t dim() const;
  std::uint8_t eval(const BitMatrix& x) const;

 private:
  std::variant<Halfspace, Disjunction, ConstantHypothesis> body_;
  bool negate_ = false;
  std::string id_;
};

struct AgreementReport {
  std::string hypothesis;
  std::string provenance;  // seed and sampler description, or source path
  Proportion rate;         // agreement with Wilson 95% interval
  std::array<std::uint64_t, 2> label_counts{};
  std::array<std::uint64_t, 2> fires{};  // h = 1 counts per label

  double mean_given(int b) const;  // E[h | b]
  double gap() const { return mean_given(1) - mean_given(0); }
  // 1/2 + 1/2 (E[h|1] - E[h|0]).
  double balanced_identity() const { return 0.5 + 0.5 * gap(); }
  // Same identity with empirical label frequencies; equals rate.rate exactly.
  double weighted_identity() const;
};

// Exact count over the examples. Throws DimensionError on shape mismatch.
AgreementReport agreement(const Hypothesis& h, const std::vector<LabeledExample>& examples,
                          std::string provenance = "", unsigned workers = 1);
AgreementReport agreement_file(const Hypothesis& h, const std::string& path);

struct LearnerConfig {
  std::size_t epochs = 10;
  double learning_rate = 1.0;
  double decay = 0.0;  // rate at step s is learning_rate / (1 + decay * s)
  std::uint64_t shuffle_seed = 0;
  bool averaged = true;
};

// Perceptron over {0,1} features with a bias coordinate folded into theta.
// Throws PreconditionError on empty input.
Halfspace perceptron_train(const std::vector<LabeledExample>& examples, const LearnerConfig& cfg);
Halfspace perceptron_train_file(const std::string& path, const LearnerConfig& cfg);

// All-ones weights over k x R with theta = E[sum of coordinates].
Halfspace centered_majority(const TestSpec& spec);
// Independent standard normal weights.
Halfspace gaussian_halfspace(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Distribution of the number of ones in one noisy column, length k + 1.
std::vector<double> column_sum_distribution(const NoisySource& src);
// Exact E[sum y >= theta | b] for the dict-test matrix via R-fold convolution.
double majority_fire_probability(const TestSpec& spec, int b, double theta);

struct ExperimentPlan {
  std::size_t k = 16;
  double eps = 0.8;
  double p = 0.25;
  std::size_t R = 16;
  double gamma = -1.0;  // negative selects 1/k^2
  std::uint64_t samples = 20000;
  std::uint64_t seed = 1;
  std::size_t num_vertices = 30;
  std::size_t num_edges = 60;
  std::size_t t = 1;
  std::size_t decode_trials = 20;
  unsigned workers = 1;
  bool completeness = true;
  bool soundness = true;
  bool lemmas = true;
};

ExperimentPlan plan_from_json(const nlohmann::json& j);
nlohmann::json plan_to_json(const ExperimentPlan& plan);

// One record per check; exploratory probes never fail the run.
std::vector<Record> run_experiment(const ExperimentPlan& plan);

}  // namespace glhs

#endif  // GLHS_HARNESS_HPP_
