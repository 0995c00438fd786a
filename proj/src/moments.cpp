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

#include "glhs/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

namespace glhs {
namespace {

double binom(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return out;
}

std::size_t distinct_size(std::size_t k, const std::vector<std::size_t>& S) {
  std::set<std::size_t> seen;
  for (std::size_t i : S) {
    if (i >= k) throw DomainError("coordinate " + std::to_string(i) + " out of range for k=" + std::to_string(k));
    seen.insert(i);
  }
  return seen.size();
}

constexpr std::size_t kEnumLimit = 20;

void check_enum(std::size_t k) {
  if (k > kEnumLimit) throw GuardError("enumeration oracle requires k <= 20, got " + std::to_string(k));
}

template <typename Dist>
double enum_moment(const Dist& dist, const std::vector<std::size_t>& S) {
  check_enum(dist.k());
  distinct_size(dist.k(), S);
  std::uint32_t mask = 0;
  for (std::size_t i : S) mask |= 1u << i;
  double total = 0.0;
  const std::uint32_t n = 1u << dist.k();
  for (std::uint32_t x = 0; x < n; ++x) {
    if ((x & mask) == mask) total += dist.point_mass(x);
  }
  return total;
}

template <typename Dist>
double conditional(const Dist& dist, const std::vector<std::size_t>& S, std::size_t j, int c) {
  if (j >= dist.k()) throw DomainError("conditioning coordinate out of range");
  if (c != 0 && c != 1) throw DomainError("conditioning value must be 0 or 1");
  const std::size_t s = distinct_size(dist.k(), S);
  std::vector<std::size_t> with_j = S;
  with_j.push_back(j);
  const std::size_t sj = distinct_size(dist.k(), with_j);
  const double pj = dist.set_moment(1);
  if (c == 1) {
    if (pj <= 0.0) throw DomainError("conditioning on x_j = 1, which has probability 0");
    return dist.set_moment(sj) / pj;
  }
  if (1.0 - pj <= 0.0) throw DomainError("conditioning on x_j = 0, which has probability 0");
  return (dist.set_moment(s) - dist.set_moment(sj)) / (1.0 - pj);
}

template <typename Dist>
double gap(const Dist& a, const Dist& b, std::size_t degree) {
  if (a.k() != b.k()) throw DimensionError("moment_gap: arity mismatch");
  double worst = 0.0;
  for (std::size_t s = 1; s <= std::min(degree, a.k()); ++s) {
    worst = std::max(worst, std::fabs(a.set_moment(s) - b.set_moment(s)));
  }
  return worst;
}

}  // namespace

ColumnMixture::ColumnMixture(std::size_t k, std::vector<Component> components)
    : k_(k), components_(std::move(components)) {
  if (k_ == 0) throw DomainError("mixture arity must be >= 1");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight >= 0.0)) throw DomainError("mixture weight must be nonnegative");
    if (c.kind == ComponentKind::kProductBernoulli && !(c.q >= 0.0 && c.q <= 1.0)) {
      throw DomainError("Bernoulli rate outside [0, 1]");
    }
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "mixture weights sum to " << total << ", not 1";
    throw DomainError(os.str());
  }
}

double ColumnMixture::set_moment(std::size_t s) const {
  if (s > k_) throw DomainError("set larger than arity");
  double m = 0.0;
  for (const auto& c : components_) {
    switch (c.kind) {
      case ComponentKind::kExactlyOne:
        m += c.weight * (s == 0 ? 1.0 : s == 1 ? 1.0 / static_cast<double>(k_) : 0.0);
        break;
      case ComponentKind::kProductBernoulli:
        m += c.weight * std::pow(c.q, static_cast<double>(s));
        break;
      case ComponentKind::kAllZero:
        m += c.weight * (s == 0 ? 1.0 : 0.0);
        break;
    }
  }
  return m;
}

double ColumnMixture::prob_all_zero() const {
  double p = 0.0;
  for (const auto& c : components_) {
    if (c.kind == ComponentKind::kProductBernoulli) {
      p += c.weight * std::pow(1.0 - c.q, static_cast<double>(k_));
    } else if (c.kind == ComponentKind::kAllZero) {
      p += c.weight;
    }
  }
  return p;
}

double ColumnMixture::point_mass(std::uint32_t x) const {
  check_enum(k_);
  const int ones = std::popcount(x);
  const int zeros = static_cast<int>(k_) - ones;
  double p = 0.0;
  for (const auto& c : components_) {
    switch (c.kind) {
      case ComponentKind::kExactlyOne:
        if (ones == 1) p += c.weight / static_cast<double>(k_);
        break;
      case ComponentKind::kProductBernoulli:
        p += c.weight * std::pow(c.q, ones) * std::pow(1.0 - c.q, zeros);
        break;
      case ComponentKind::kAllZero:
        if (ones == 0) p += c.weight;
        break;
    }
  }
  return p;
}

NoisySource::NoisySource(ColumnMixture b, double g) : base(std::move(b)), gamma(g) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("noise rate outside [0, 1]");
}

double NoisySource::set_moment(std::size_t s) const {
  double m = 0.0;
  for (std::size_t u = 0; u <= s; ++u) {
    m += binom(s, u) * std::pow(1.0 - gamma, static_cast<double>(u)) *
         std::pow(gamma / 2.0, static_cast<double>(s - u)) * base.set_moment(u);
  }
  return m;
}

double NoisySource::prob_all_zero() const {
  const double k = static_cast<double>(base.k());
  double p = 0.0;
  for (const auto& c : base.components()) {
    switch (c.kind) {
      case ComponentKind::kExactlyOne:
        p += c.weight * (gamma / 2.0) * std::pow(1.0 - gamma / 2.0, k - 1.0);
        break;
      case ComponentKind::kProductBernoulli: {
        const double q = (1.0 - gamma) * c.q + gamma / 2.0;
        p += c.weight * std::pow(1.0 - q, k);
        break;
      }
      case ComponentKind::kAllZero:
        p += c.weight * std::pow(1.0 - gamma / 2.0, k);
        break;
    }
  }
  return p;
}

double NoisySource::point_mass(std::uint32_t y) const {
  check_enum(base.k());
  const std::size_t k = base.k();
  const int ones = std::popcount(y);
  const int zeros = static_cast<int>(k) - ones;
  // P(y_i = 1 | x_i = 1) and P(y_i = 1 | x_i = 0).
  const double stay1 = 1.0 - gamma / 2.0;
  const double rise0 = gamma / 2.0;
  double p = 0.0;
  for (const auto& c : base.components()) {
    switch (c.kind) {
      case ComponentKind::kExactlyOne: {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
          double prob = 1.0;
          for (std::size_t i = 0; i < k; ++i) {
            const bool yi = (y >> i) & 1u;
            const double p1 = (i == j) ? stay1 : rise0;
            prob *= yi ? p1 : 1.0 - p1;
          }
          sum += prob;
        }
        p += c.weight * sum / static_cast<double>(k);
        break;
      }
      case ComponentKind::kProductBernoulli: {
        const double q = c.q * stay1 + (1.0 - c.q) * rise0;
        p += c.weight * std::pow(q, ones) * std::pow(1.0 - q, zeros);
        break;
      }
      case ComponentKind::kAllZero:
        p += c.weight * std::pow(rise0, ones) * std::pow(1.0 - rise0, zeros);
        break;
    }
  }
  return p;
}

std::array<double, 4> closed_form_d0_weights(std::size_t k, double eps, double p) {
  const double b = (1.0 - eps) / (static_cast<double>(k) * p);
  return {eps / 4.0 + 4.0 * b, eps / 4.0 - 3.0 * b, eps / 4.0 + 4.0 * b / 3.0, eps / 4.0 - b / 4.0};
}

std::array<double, 4> system_residuals(std::size_t k, double eps, double p,
                                       const std::array<double, 4>& w) {
  std::array<double, 4> r{};
  for (int m = 1; m <= 4; ++m) {
    double lhs = 0.0;
    double rhs = (m == 1) ? (1.0 - eps) / static_cast<double>(k) : 0.0;
    for (int i = 1; i <= 4; ++i) {
      const double rate = std::pow(i * p, m);
      lhs += w[i - 1] * rate;
      rhs += eps / 4.0 * rate;
    }
    r[m - 1] = lhs - rhs;
  }
  return r;
}

namespace {

void check_params(std::size_t k, double eps, double p) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (!(p > 0.0)) throw DomainError("p must be positive");
  if (4.0 * p > 1.0 + kWeightTolerance) {
    std::ostringstream os;
    os << "infeasible: rate 4p = " << 4.0 * p << " exceeds 1";
    throw FeasibilityError(os.str());
  }
}

std::array<double, 4> gaussian_solve(std::size_t k, double eps, double p) {
  double a[4][5];
  for (int m = 1; m <= 4; ++m) {
    double rhs = (m == 1) ? (1.0 - eps) / static_cast<double>(k) : 0.0;
    for (int i = 1; i <= 4; ++i) {
      a[m - 1][i - 1] = std::pow(i * p, m);
      rhs += eps / 4.0 * a[m - 1][i - 1];
    }
    a[m - 1][4] = rhs;
  }
  // Row scaling first: powers of p span several orders of magnitude.
  for (auto& row : a) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s = std::max(s, std::fabs(row[c]));
    for (int c = 0; c < 5; ++c) row[c] /= s;
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (piv != col) std::swap(a[piv], a[col]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::array<double, 4> x{};
  for (int r = 3; r >= 0; --r) {
    double s = a[r][4];
    for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

// Empty string when feasible.
// 1..4 for a negative eps_i, 0 for a negative AllZero weight, -1 if feasible.
int violated_index(const std::array<double, 4>& w) {
  for (int i = 0; i < 4; ++i) {
    if (w[i] < -kWeightTolerance) return i + 1;
  }
  if (1.0 - (w[0] + w[1] + w[2] + w[3]) < -kWeightTolerance) return 0;
  return -1;
}

std::string violation_message(std::size_t k, double eps, double p, const std::array<double, 4>& w, int idx) {
  std::ostringstream os;
  os.precision(12);
  os << "infeasible gadget (k=" << k << "): ";
  if (idx > 0) {
    os << "eps" << idx << " = " << w[idx - 1] << " < 0 (need eps*k*p >= 12(1-eps): "
       << eps * static_cast<double>(k) * p << " < " << 12.0 * (1.0 - eps) << ")";
  } else {
    os << "eps0 = 1 - sum(eps_i) = " << 1.0 - (w[0] + w[1] + w[2] + w[3])
       << " < 0 (AllZero weight; need eps + 25(1-eps)/(12kp) <= 1)";
  }
  return os.str();
}

}  // namespace

std::array<double, 4> solve_d0_weights(std::size_t k, double eps, double p) {
  check_params(k, eps, p);
  auto w = gaussian_solve(k, eps, p);
  const int idx = violated_index(w);
  if (idx >= 0) throw FeasibilityError(violation_message(k, eps, p, w, idx));
  for (double& x : w) x = std::max(x, 0.0);
  return w;
}

bool pair_feasible(std::size_t k, double eps, double p, std::string* violation) {
  const bool params_ok = k >= 1 && eps > 0.0 && eps < 1.0 && p > 0.0 && 4.0 * p <= 1.0 + kWeightTolerance;
  if (!params_ok) {
    try {
      check_params(k, eps, p);
    } catch (const Error& e) {
      if (violation) *violation = e.what();
    }
    return false;
  }
  const auto w = gaussian_solve(k, eps, p);
  const int idx = violated_index(w);
  if (idx < 0) return true;
  if (violation) *violation = violation_message(k, eps, p, w, idx);
  return false;
}

GadgetPair build_pair(std::size_t k, double eps, double p) {
  GadgetPair g;
  g.k = k;
  g.eps = eps;
  g.p = p;
  g.d0_weights = solve_d0_weights(k, eps, p);

  std::vector<Component> c1{{1.0 - eps, ComponentKind::kExactlyOne, 0.0}};
  std::vector<Component> c0;
  double used = 0.0;
  for (int i = 1; i <= 4; ++i) {
    const double rate = std::min(1.0, i * p);
    c1.push_back({eps / 4.0, ComponentKind::kProductBernoulli, rate});
    c0.push_back({g.d0_weights[i - 1], ComponentKind::kProductBernoulli, rate});
    used += g.d0_weights[i - 1];
  }
  c0.insert(c0.begin(), Component{std::max(0.0, 1.0 - used), ComponentKind::kAllZero, 0.0});
  g.d0 = ColumnMixture(k, std::move(c0));
  g.d1 = ColumnMixture(k, std::move(c1));
  return g;
}

std::string GadgetPair::describe(double gamma) const {
  std::ostringstream os;
  os.precision(17);
  os << "k=" << k << " eps=" << eps << " p=" << p;
  for (int i = 0; i < 4; ++i) os << " eps" << (i + 1) << "=" << d0_weights[i];
  os << " gamma=" << gamma;
  return os.str();
}

double paper_eps(std::size_t k) { return 1.0 / std::sqrt(static_cast<double>(k)); }
double paper_p(std::size_t k) { return 1.0 / std::cbrt(static_cast<double>(k)); }

double exact_moment(const ColumnMixture& dist, const std::vector<std::size_t>& S) {
  return dist.set_moment(distinct_size(dist.k(), S));
}

double exact_moment(const NoisySource& dist, const std::vector<std::size_t>& S) {
  return dist.set_moment(distinct_size(dist.k(), S));
}

double moment_gap(const ColumnMixture& a, const ColumnMixture& b, std::size_t degree) {
  return gap(a, b, degree);
}

double moment_gap(const NoisySource& a, const NoisySource& b, std::size_t degree) {
  return gap(a, b, degree);
}

double conditional_moment(const ColumnMixture& dist, const std::vector<std::size_t>& S,
                          std::size_t j, int c) {
  return conditional(dist, S, j, c);
}

double conditional_moment(const NoisySource& dist, const std::vector<std::size_t>& S,
                          std::size_t j, int c) {
  return conditional(dist, S, j, c);
}

double prob_all_zero(const ColumnMixture& dist) { return dist.prob_all_zero(); }
double prob_all_zero(const NoisySource& dist) { return dist.prob_all_zero(); }

double enum_oracle_moment(const ColumnMixture& dist, const std::vector<std::size_t>& S) {
  return enum_moment(dist, S);
}

double enum_oracle_moment(const NoisySource& dist, const std::vector<std::size_t>& S) {
  return enum_moment(dist, S);
}

double enum_oracle_all_zero(const NoisySource& dist) {
  check_enum(dist.k());
  return dist.point_mass(0);
}

void sample_column(const ColumnMixture& dist, RngCursor& rng, BitVector& out) {
  out = BitVector(dist.k());
  sample_column_into(dist, 0.0, rng, [&](std::size_t i, bool bit) { out.set(i, bit); });
}

void apply_noise(BitVector& bits, double gamma, RngCursor& rng) {
  for_each_success(bits.size(), gamma, rng, [&](std::size_t i) { bits.set(i, rng.bit()); });
}

void sample_column(const NoisySource& dist, RngCursor& rng, BitVector& out) {
  out = BitVector(dist.k());
  sample_column_into(dist.base, dist.gamma, rng, [&](std::size_t i, bool bit) { out.set(i, bit); });
}

BitVector sample_column(const NoisySource& dist, RngCursor& rng) {
  BitVector out(dist.k());
  sample_column(dist, rng, out);
  return out;
}

}  // namespace glhs
