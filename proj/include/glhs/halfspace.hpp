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

#ifndef GLHS_HALFSPACE_HPP_
#define GLHS_HALFSPACE_HPP_

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "glhs/core.hpp"

namespace glhs {

// sgn(w . x - theta), with sgn(0) = 1. Coordinates are row-major over a
// rows x cols grid (vertex/slot, label).
struct Halfspace {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;
  double theta = 0.0;

  Halfspace() = default;
  Halfspace(std::size_t r, std::size_t c, std::vector<double> w, double th);

  std::size_t dim() const { return weights.size(); }
  double score(const BitVector& x) const;
  std::uint8_t eval(const BitVector& x) const { return score(x) >= 0.0 ? 1 : 0; }
  std::uint8_t eval(const BitMatrix& x) const { return eval(x.flat()); }

  // Weights of one row as a vector of length cols.
  std::vector<double> block(std::size_t row) const;
};

struct Disjunction {
  std::size_t dim = 0;
  std::vector<std::size_t> literals;  // sorted, positive literals

  Disjunction() = default;
  Disjunction(std::size_t d, std::vector<std::size_t> lits);

  std::uint8_t eval(const BitVector& x) const;
  std::uint8_t eval(const BitMatrix& x) const { return eval(x.flat()); }
};

std::uint8_t eval_halfspace(const Halfspace& h, const BitVector& x);
std::uint8_t eval_disjunction(const Disjunction& d, const BitVector& x);

// Weight 1 on each literal, theta = 1/2.
Halfspace disjunction_halfspace(const Disjunction& d, std::size_t rows, std::size_t cols);
// Weight -1 on each literal, theta = -1/2: fires iff no literal is set.
Halfspace negated_disjunction_halfspace(const Disjunction& d, std::size_t rows, std::size_t cols);

inline constexpr std::size_t kInfiniteIndex = std::numeric_limits<std::size_t>::max();

struct CriticalIndexReport {
  std::vector<std::size_t> order;   // indices sorted by |w| descending, ties ascending
  std::size_t c_tau = 1;            // 1-based; kInfiniteIndex when none qualifies
  std::vector<double> tail_norms;   // sigma_j for j = 1..n (0-based storage)

  bool regular() const { return c_tau == 1; }
};

// Stable descending order of |w|.
std::vector<std::size_t> descending_order(const std::vector<double>& w);

CriticalIndexReport critical_index(const std::vector<double>& w, double tau);

// B_t(w): first t entries of the descending order.
std::vector<std::size_t> top_indices(const std::vector<double>& w, std::size_t t);
// First c_tau - 1 indices (all n when c_tau is infinite).
std::vector<std::size_t> regularizing_prefix(const std::vector<double>& w, double tau);
// B_{c_tau}(w), the literal reading of C_tau(w).
std::vector<std::size_t> critical_set(const std::vector<double>& w, double tau);

std::vector<double> truncate(const std::vector<double>& w, const std::vector<std::size_t>& S);
// w with the coordinates in S set to zero.
std::vector<double> remove_indices(const std::vector<double>& w, const std::vector<std::size_t>& S);

double l2_norm(const std::vector<double>& w);
double l1_norm(const std::vector<double>& w);

struct DecayCheck {
  bool ok = true;
  std::size_t c_tau = 0;
  std::string failure;  // first violated inequality
};

// Geometric-decay chain over the sorted magnitudes, for 1 <= i <= j <= l+1.
// Throws PreconditionError (naming c_tau) when c_tau <= l.
DecayCheck check_geometric_decay(const std::vector<double>& w, double tau, std::size_t l);

// (4 / tau^2) ln(1 / tau).
double decay_gap(double tau);

std::string halfspace_to_json(const Halfspace& h);
Halfspace halfspace_from_json(const std::string& text);
void write_halfspace(const std::string& path, const Halfspace& h);
Halfspace read_halfspace(const std::string& path);

}  // namespace glhs

#endif  // GLHS_HALFSPACE_HPP_
