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

#include "glhs/invariance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "glhs/halfspace.hpp"

namespace glhs {
namespace {

const std::vector<double> kBridge = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};

double poly_derivative(const std::vector<double>& c, double u, int order) {
  double out = 0.0;
  for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(order);) {
    double coef = c[i];
    for (int r = 0; r < order; ++r) coef *= static_cast<double>(i - static_cast<std::size_t>(r));
    out = out * u + coef;
  }
  return out;
}

double max_abs_fourth(const std::vector<double>& c) {
  constexpr int kGrid = 20000;
  double best = 0.0;
  int arg = 0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = std::fabs(poly_derivative(c, static_cast<double>(i) / kGrid, 4));
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  // Golden-section refinement on the bracketing cell pair.
  double lo = std::max(0.0, (arg - 1.0) / kGrid);
  double hi = std::min(1.0, (arg + 1.0) / kGrid);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    if (std::fabs(poly_derivative(c, a, 4)) > std::fabs(poly_derivative(c, b, 4))) {
      hi = b;
    } else {
      lo = a;
    }
  }
  best = std::max(best, std::fabs(poly_derivative(c, 0.5 * (lo + hi), 4)));
  return best * (1.0 + 1e-12);
}

void check_family(const EnsembleFamily& F, const BlockWeights& l) {
  if (F.size() != l.size()) throw DimensionError("family and block weights differ in length");
  double points = 1.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F[i].vars() != l[i].size()) throw DimensionError("block weight length does not match ensemble");
    points *= static_cast<double>(F[i].support().size());
  }
  if (points > static_cast<double>(kEnumerationGuard)) {
    throw GuardError("product support exceeds the 1e7 enumeration guard");
  }
}

void multisets(std::size_t vars, std::size_t size, std::size_t start, std::vector<std::size_t>& cur,
               const std::function<bool(const std::vector<std::size_t>&)>& fn, bool& stop) {
  if (stop) return;
  if (cur.size() == size) {
    if (!fn(cur)) stop = true;
    return;
  }
  for (std::size_t v = start; v < vars && !stop; ++v) {
    cur.push_back(v);
    multisets(vars, size, v, cur, fn, stop);
    cur.pop_back();
  }
}

// Atoms of l restricted to one family, merged within 1e-12 and sorted.
std::vector<std::pair<double, double>> linear_form_law(const EnsembleFamily& F, const BlockWeights& l) {
  std::vector<std::pair<double, double>> atoms;
  enumerate_linear_form(F, l, [&](double p, double v) { atoms.emplace_back(v, p); });
  std::sort(atoms.begin(), atoms.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && a.first - merged.back().first <= 1e-12) {
      merged.back().second += a.second;
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

}  // namespace

Ensemble::Ensemble(std::size_t vars, std::vector<Atom> support) : vars_(vars), support_(std::move(support)) {
  double total = 0.0;
  for (const auto& a : support_) {
    if (a.values.size() != vars_) throw DimensionError("ensemble atom has wrong arity");
    if (!(a.prob >= 0.0)) throw DomainError("ensemble probability must be nonnegative");
    for (double v : a.values) {
      if (!(std::fabs(v) <= 1.0)) throw DomainError("ensemble values must be bounded by 1");
    }
    total += a.prob;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw DomainError("ensemble probabilities must sum to 1");
}

double Ensemble::moment(const std::vector<std::size_t>& S) const {
  double m = 0.0;
  for (const auto& a : support_) {
    double prod = a.prob;
    for (std::size_t i : S) {
      if (i >= vars_) throw DimensionError("moment index out of range");
      prod *= a.values[i];
    }
    m += prod;
  }
  return m;
}

MomentMatch compare_moments(const Ensemble& A, const Ensemble& B, std::size_t degree) {
  if (A.vars() != B.vars()) throw DimensionError("matching_moments: arity mismatch");
  MomentMatch out;
  std::vector<std::size_t> cur;
  for (std::size_t d = 1; d <= degree; ++d) {
    bool stop = false;
    multisets(A.vars(), d, 0, cur, [&](const std::vector<std::size_t>& S) {
      const double diff = std::fabs(A.moment(S) - B.moment(S));
      out.worst = std::max(out.worst, diff);
      if (diff > 1e-12 && out.match) {
        out.match = false;
        out.violating = S;
      }
      return true;
    }, stop);
  }
  return out;
}

bool matching_moments(const Ensemble& A, const Ensemble& B, std::size_t degree) {
  return compare_moments(A, B, degree).match;
}

Ensemble marginal_ensemble(const NoisySource& src, std::size_t m) {
  const std::size_t k = src.k();
  if (m == 0 || m > k || m > 20) throw DomainError("marginal size must lie in [1, min(k, 20)]");
  const std::uint32_t n = 1u << m;
  std::vector<double> clean(n, 0.0);
  for (const auto& c : src.base.components()) {
    for (std::uint32_t x = 0; x < n; ++x) {
      const int ones = std::popcount(x);
      const int zeros = static_cast<int>(m) - ones;
      switch (c.kind) {
        case ComponentKind::kExactlyOne:
          if (ones == 1) clean[x] += c.weight / static_cast<double>(k);
          if (ones == 0) clean[x] += c.weight * static_cast<double>(k - m) / static_cast<double>(k);
          break;
        case ComponentKind::kProductBernoulli:
          clean[x] += c.weight * std::pow(c.q, ones) * std::pow(1.0 - c.q, zeros);
          break;
        case ComponentKind::kAllZero:
          if (ones == 0) clean[x] += c.weight;
          break;
      }
    }
  }
  const double g = src.gamma;
  std::vector<Atom> atoms;
  for (std::uint32_t y = 0; y < n; ++y) {
    double p = 0.0;
    for (std::uint32_t x = 0; x < n; ++x) {
      double t = clean[x];
      for (std::size_t i = 0; i < m; ++i) {
        const bool xi = (x >> i) & 1u;
        const bool yi = (y >> i) & 1u;
        t *= (xi == yi) ? 1.0 - g / 2.0 : g / 2.0;
      }
      p += t;
    }
    Atom a;
    a.prob = p;
    for (std::size_t i = 0; i < m; ++i) a.values.push_back(((y >> i) & 1u) ? 1.0 : 0.0);
    atoms.push_back(std::move(a));
  }
  double total = 0.0;
  for (const auto& a : atoms) total += a.prob;
  for (auto& a : atoms) a.prob /= total;
  return Ensemble(m, std::move(atoms));
}

Ensemble marginal_ensemble(const ColumnMixture& src, std::size_t m) {
  return marginal_ensemble(NoisySource(src, 0.0), m);
}

SmoothSign::SmoothSign(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0 && lambda < 0.5)) throw DomainError("smooth_sign needs 0 < lambda < 1/2");
  c_phi_ = max_abs_fourth(kBridge) / 16.0;
}

const std::vector<double>& SmoothSign::bridge() const { return kBridge; }

double SmoothSign::derivative(double t, int order) const {
  const double u = (t + lambda_) / (2.0 * lambda_);
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return order == 0 ? 1.0 : 0.0;
  return poly_derivative(kBridge, u, order) / std::pow(2.0 * lambda_, order);
}

SmoothSign smooth_sign(double lambda) { return SmoothSign(lambda); }

void enumerate_linear_form(const EnsembleFamily& F, const BlockWeights& l,
                           const std::function<void(double, double)>& fn) {
  check_family(F, l);
  const std::size_t R = F.size();
  // Per-ensemble contributions (prob, <l_i, value>).
  std::vector<std::vector<std::pair<double, double>>> contrib(R);
  for (std::size_t i = 0; i < R; ++i) {
    for (const auto& a : F[i].support()) {
      double s = 0.0;
      for (std::size_t j = 0; j < a.values.size(); ++j) s += l[i][j] * a.values[j];
      contrib[i].emplace_back(a.prob, s);
    }
  }
  std::vector<std::size_t> idx(R, 0);
  if (R == 0) {
    fn(1.0, 0.0);
    return;
  }
  for (const auto& c : contrib) {
    if (c.empty()) return;
  }
  while (true) {
    double p = 1.0;
    double v = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
      p *= contrib[i][idx[i]].first;
      v += contrib[i][idx[i]].second;
    }
    fn(p, v);
    std::size_t r = 0;
    while (r < R && ++idx[r] == contrib[r].size()) idx[r++] = 0;
    if (r == R) break;
  }
}

double expect_psi(const EnsembleFamily& F, const BlockWeights& l, double theta, const Psi& psi) {
  double e = 0.0;
  enumerate_linear_form(F, l, [&](double p, double v) { e += p * psi(v - theta); });
  return e;
}

double sum_l1_fourth(const BlockWeights& l) {
  double s = 0.0;
  for (const auto& b : l) s += std::pow(l1_norm(b), 4);
  return s;
}

namespace {

void require_matching(const EnsembleFamily& A, const EnsembleFamily& B) {
  if (A.size() != B.size()) throw DimensionError("families differ in length");
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto m = compare_moments(A[i], B[i], 3);
    if (!m.match) {
      std::ostringstream os;
      os << "degree-3 moments differ at index " << i << ", multiset {";
      for (std::size_t j = 0; j < m.violating.size(); ++j) os << (j ? "," : "") << m.violating[j];
      os << "}";
      throw PreconditionError(os.str());
    }
  }
}

}  // namespace

GapReport invariance_gap(const EnsembleFamily& A, const EnsembleFamily& B, const BlockWeights& l, double theta,
                         const Psi& psi, double K) {
  require_matching(A, B);
  GapReport r;
  r.gap = std::fabs(expect_psi(A, l, theta, psi) - expect_psi(B, l, theta, psi));
  r.bound = K * sum_l1_fourth(l);
  r.pass = r.gap <= r.bound + 1e-9;
  return r;
}

HybridReport hybrid_steps(const EnsembleFamily& A, const EnsembleFamily& B, const BlockWeights& l, double theta,
                          const Psi& psi, double K) {
  require_matching(A, B);
  const std::size_t R = A.size();
  HybridReport h;
  std::vector<double> e(R + 1);
  for (std::size_t i = 0; i <= R; ++i) {
    EnsembleFamily X;
    for (std::size_t j = 0; j < R; ++j) X.push_back(j < i ? B[j] : A[j]);
    e[i] = expect_psi(X, l, theta, psi);
  }
  for (std::size_t i = 1; i <= R; ++i) {
    h.steps.push_back(e[i - 1] - e[i]);
    h.step_bounds.push_back(K / 12.0 * std::pow(l1_norm(l[i - 1]), 4));
  }
  h.total = e[0] - e[R];
  return h;
}

double spread_function(const EnsembleFamily& F, const BlockWeights& l, double alpha) {
  const auto law = linear_form_law(F, l);
  double best = 0.0;
  std::size_t hi = 0;
  double window = 0.0;
  // Window [v, v + 2 alpha] anchored at each atom.
  for (std::size_t lo = 0; lo < law.size(); ++lo) {
    if (hi < lo) {
      hi = lo;
      window = 0.0;
    }
    while (hi < law.size() && law[hi].first <= law[lo].first + 2.0 * alpha + 1e-12) {
      window += law[hi].second;
      ++hi;
    }
    best = std::max(best, window);
    window -= law[lo].second;
  }
  return std::min(1.0, best);
}

SgnGapReport sgn_gap_bound(const EnsembleFamily& A, const EnsembleFamily& B, const BlockWeights& l, double theta,
                           double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw DomainError("alpha must lie in (0, 1/2)");
  require_matching(A, B);
  const Psi sgn = [](double t) { return t >= 0.0 ? 1.0 : 0.0; };
  SgnGapReport r;
  r.gap = std::fabs(expect_psi(A, l, theta, sgn) - expect_psi(B, l, theta, sgn));
  r.c_alpha = std::max(spread_function(A, l, alpha), spread_function(B, l, alpha));
  const SmoothSign phi(alpha);
  r.bound = phi.K() * sum_l1_fourth(l) + 2.0 * r.c_alpha;
  r.pass = r.gap <= r.bound + 1e-9;
  return r;
}

}  // namespace glhs
