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

#include "glhs/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "glhs/halfspace.hpp"

namespace glhs {
namespace {

double dot(const std::vector<double>& w, const BitVector& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (y.get(i)) s += w[i];
  }
  return s;
}

template <typename Pred>
Proportion noisy_frequency(const BaseDistribution& D, double gamma, std::size_t trials, std::uint64_t seed,
                           std::uint64_t stream, Pred&& pred) {
  std::uint64_t hits = 0;
  BitVector y(D.n);
  for (std::size_t t = 0; t < trials; ++t) {
    RngCursor rng(seed, substream(stream, t));
    D.sample(rng, y);
    apply_noise(y, gamma, rng);
    if (pred(y)) ++hits;
  }
  return proportion(hits, trials);
}

constexpr std::uint64_t kSmallBallStream = 0x5342;
constexpr std::uint64_t kSpreadStream = 0x5350;
constexpr std::uint64_t kClaimStream = 0x434c;
constexpr std::uint64_t kBerryStream = 0x4245;

}  // namespace

IntervalQuery::IntervalQuery(double lo, double hi) : a(lo), b(hi) {
  if (!(a <= b)) throw DomainError("interval needs a <= b");
}

BaseDistribution point_mass_distribution(const BitVector& x, std::string name) {
  BaseDistribution d;
  d.name = std::move(name);
  d.n = x.size();
  d.sample = [x](RngCursor&, BitVector& out) { out = x; };
  return d;
}

BaseDistribution product_distribution(std::size_t n, double q) {
  BaseDistribution d;
  std::ostringstream os;
  os << "product(" << q << ")";
  d.name = os.str();
  d.n = n;
  d.sample = [n, q](RngCursor& rng, BitVector& out) {
    out = BitVector(n);
    for_each_success(n, q, rng, [&](std::size_t i) { out.set(i, true); });
  };
  return d;
}

BaseDistribution mixture_distribution(const ColumnMixture& m, std::string name) {
  BaseDistribution d;
  d.name = std::move(name);
  d.n = m.k();
  d.sample = [m](RngCursor& rng, BitVector& out) { sample_column(m, rng, out); };
  return d;
}

void check_geometric_vector(const std::vector<double>& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double a = std::fabs(w[i]);
    const double b = std::fabs(w[i + 1]);
    if (b > a / 3.0 * (1 + 1e-12)) {
      std::ostringstream os;
      os.precision(17);
      os << "geometric precondition fails at i=" << (i + 1) << ": |w_" << (i + 2) << "| / |w_" << (i + 1)
         << "| = " << b / a << " > 1/3";
      throw PreconditionError(os.str());
    }
  }
}

std::size_t unique_point_in_interval(const std::vector<double>& w, const IntervalQuery& I) {
  const std::size_t T = w.size();
  if (T > kSmallBallGuard) throw GuardError("unique_point_in_interval: T > 24");
  check_geometric_vector(w);
  if (T > 0 && I.length() > std::fabs(w.back()) / 3.0 * (1 + 1e-12)) {
    throw PreconditionError("interval longer than |w_T| / 3");
  }
  std::size_t count = 0;
  for (std::uint32_t x = 0; x < (1u << T); ++x) {
    double s = 0.0;
    for (std::size_t i = 0; i < T; ++i) {
      if ((x >> i) & 1u) s += w[i];
    }
    if (I.contains(s)) ++count;
  }
  return count;
}

BitVector nearest_subset_point(const std::vector<double>& w, double alpha) {
  const std::size_t T = w.size();
  if (T > kSmallBallGuard) throw GuardError("nearest_subset_point: T > 24");
  std::uint32_t best = 0;
  double best_d = INFINITY;
  for (std::uint32_t x = 0; x < (1u << T); ++x) {
    double s = 0.0;
    for (std::size_t i = 0; i < T; ++i) {
      if ((x >> i) & 1u) s += w[i];
    }
    if (std::fabs(s - alpha) < best_d) {
      best_d = std::fabs(s - alpha);
      best = x;
    }
  }
  BitVector out(T);
  for (std::size_t i = 0; i < T; ++i) out.set(i, (best >> i) & 1u);
  return out;
}

LemmaEstimate noisy_small_ball(const std::vector<double>& w, const BaseDistribution& D, double gamma,
                               double theta, std::size_t trials, std::uint64_t seed) {
  check_geometric_vector(w);
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  if (D.n != w.size()) throw DimensionError("distribution arity does not match w");
  const double half = w.empty() ? 0.0 : std::fabs(w.back()) / 6.0;
  LemmaEstimate out;
  out.estimate = noisy_frequency(D, gamma, trials, seed, kSmallBallStream, [&](const BitVector& y) {
    return std::fabs(dot(w, y) - theta) <= half;
  });
  out.bound = std::pow(1.0 - gamma / 2.0, static_cast<double>(w.size()));
  out.pass = out.estimate.rate <= out.bound + 4.0 * out.estimate.sigma;
  return out;
}

double spread_bound(double gamma, double tau, double width) {
  const double sg = std::sqrt(gamma);
  return 4.0 * width / sg + 4.0 * tau / sg + 2.0 * std::exp(-gamma * gamma / (2.0 * tau * tau));
}

LemmaEstimate spread_estimate(const std::vector<double>& w, double tau, const BaseDistribution& D,
                              double gamma, const IntervalQuery& I, std::size_t trials, std::uint64_t seed) {
  if (std::fabs(l2_norm(w) - 1.0) > 1e-9) throw PreconditionError("spread_estimate needs ||w||_2 = 1");
  const auto ci = critical_index(w, tau);
  if (!ci.regular()) {
    throw PreconditionError("spread_estimate needs a tau-regular w; c_tau = " +
                            (ci.c_tau == kInfiniteIndex ? std::string("inf") : std::to_string(ci.c_tau)));
  }
  if (D.n != w.size()) throw DimensionError("distribution arity does not match w");
  LemmaEstimate out;
  out.estimate = noisy_frequency(D, gamma, trials, seed, kSpreadStream,
                                 [&](const BitVector& y) { return I.contains(dot(w, y)); });
  out.bound = spread_bound(gamma, tau, I.length());
  out.pass = out.estimate.rate <= out.bound + 4.0 * out.estimate.sigma;
  return out;
}

LemmaEstimate variance_claim_estimate(const std::vector<double>& w, double tau, double gamma,
                                      std::size_t trials, std::uint64_t seed) {
  if (std::fabs(l2_norm(w) - 1.0) > 1e-9) throw PreconditionError("claim needs ||w||_2 = 1");
  if (!critical_index(w, tau).regular()) throw PreconditionError("claim needs a tau-regular w");
  std::uint64_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RngCursor rng(seed, substream(kClaimStream, t));
    double s = 0.0;
    for_each_success(w.size(), gamma, rng, [&](std::size_t i) { s += w[i] * w[i]; });
    if (s >= gamma / 2.0) ++hits;
  }
  LemmaEstimate out;
  out.estimate = proportion(hits, trials);
  out.bound = 1.0 - 2.0 * std::exp(-gamma * gamma / (2.0 * tau * tau));
  out.pass = out.estimate.rate >= out.bound - 4.0 * out.estimate.sigma;
  return out;
}

double hoeffding_tail(std::size_t n, const std::vector<double>& ranges, double t) {
  if (ranges.size() != n) throw DimensionError("hoeffding_tail: need one range per variable");
  double denom = 0.0;
  for (double r : ranges) {
    if (r < 0.0) throw DomainError("hoeffding_tail: negative range");
    denom += r * r;
  }
  if (denom == 0.0) return 0.0;
  const double nt = static_cast<double>(n) * t;
  return std::min(1.0, 2.0 * std::exp(-nt * nt / denom));
}

double chebyshev_tail(double t) {
  if (!(t > 0.0)) throw DomainError("chebyshev_tail needs t > 0");
  return 1.0 / (t * t);
}

double berry_esseen_gap(const std::vector<double>& c, std::size_t trials, std::uint64_t seed) {
  double norm2 = 0.0;
  for (double x : c) norm2 += x * x;
  if (std::fabs(norm2 - 1.0) > 1e-9) throw DomainError("berry_esseen_gap needs sum c_i^2 = 1");
  const std::size_t n = c.size();
  std::vector<double> sums;
  if (n <= kBerryEsseenExhaustive) {
    sums.resize(std::size_t{1} << n);
    for (std::size_t x = 0; x < sums.size(); ++x) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += ((x >> i) & 1u) ? c[i] : -c[i];
      sums[x] = s;
    }
  } else {
    if (trials == 0) throw GuardError("berry_esseen_gap: n > 20 needs a Monte Carlo trial count");
    sums.resize(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      RngCursor rng(seed, substream(kBerryStream, t));
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += rng.bit() ? c[i] : -c[i];
      sums[t] = s;
    }
  }
  std::sort(sums.begin(), sums.end());
  const double total = static_cast<double>(sums.size());
  double worst = 0.0;
  // Sums within 1e-12 are treated as one atom.
  std::size_t i = 0;
  while (i < sums.size()) {
    std::size_t j = i;
    while (j < sums.size() && sums[j] - sums[i] <= 1e-12) ++j;
    const double phi = normal_cdf(sums[i]);
    const double left = static_cast<double>(i) / total;
    const double right = static_cast<double>(j) / total;
    worst = std::max({worst, std::fabs(left - phi), std::fabs(right - phi)});
    i = j;
  }
  return worst;
}

GeometricSubsequence geometric_subsequence(const std::vector<double>& w, double tau, std::size_t T) {
  GeometricSubsequence g;
  g.step = static_cast<std::size_t>(std::ceil(decay_gap(tau)));
  const std::size_t top = 1 + T * g.step;
  if (top > w.size()) throw PreconditionError("geometric_subsequence: 1 + T*step exceeds dimension");
  const auto ci = critical_index(w, tau);
  if (ci.c_tau != kInfiniteIndex && ci.c_tau <= top) {
    throw PreconditionError("geometric_subsequence needs c_tau > " + std::to_string(top) +
                            "; c_tau = " + std::to_string(ci.c_tau));
  }
  for (std::size_t i = 0; i <= T; ++i) {
    const std::size_t pos = 1 + i * g.step;
    g.positions.push_back(pos);
    g.indices.push_back(ci.order[pos - 1]);
  }
  for (std::size_t i = 0; i + 1 < g.indices.size(); ++i) {
    if (std::fabs(w[g.indices[i + 1]]) > std::fabs(w[g.indices[i]]) / 3.0 * (1 + 1e-12)) g.ratios_ok = false;
  }
  return g;
}

}  // namespace glhs
