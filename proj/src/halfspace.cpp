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

#include "glhs/halfspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace glhs {

Halfspace::Halfspace(std::size_t r, std::size_t c, std::vector<double> w, double th)
    : rows(r), cols(c), weights(std::move(w)), theta(th) {
  if (rows * cols != weights.size()) throw DimensionError("halfspace shape does not match weights");
  for (double x : weights) {
    if (!std::isfinite(x)) throw DomainError("halfspace weights must be finite");
  }
  if (!std::isfinite(theta)) throw DomainError("halfspace threshold must be finite");
}

double Halfspace::score(const BitVector& x) const {
  if (x.size() != weights.size()) throw DimensionError("halfspace/input dimension mismatch");
  double s = 0.0;
  const auto& words = x.words();
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    std::uint64_t bits = words[wi];
    while (bits) {
      const int b = std::countr_zero(bits);
      s += weights[wi * 64 + static_cast<std::size_t>(b)];
      bits &= bits - 1;
    }
  }
  return s - theta;
}

std::vector<double> Halfspace::block(std::size_t row) const {
  if (row >= rows) throw DimensionError("block row out of range");
  return {weights.begin() + static_cast<std::ptrdiff_t>(row * cols),
          weights.begin() + static_cast<std::ptrdiff_t>((row + 1) * cols)};
}

Disjunction::Disjunction(std::size_t d, std::vector<std::size_t> lits) : dim(d), literals(std::move(lits)) {
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  if (!literals.empty() && literals.back() >= dim) throw DimensionError("literal outside coordinate space");
}

std::uint8_t Disjunction::eval(const BitVector& x) const {
  if (x.size() != dim) throw DimensionError("disjunction/input dimension mismatch");
  for (std::size_t c : literals) {
    if (x.get(c)) return 1;
  }
  return 0;
}

std::uint8_t eval_halfspace(const Halfspace& h, const BitVector& x) { return h.eval(x); }
std::uint8_t eval_disjunction(const Disjunction& d, const BitVector& x) { return d.eval(x); }

Halfspace disjunction_halfspace(const Disjunction& d, std::size_t rows, std::size_t cols) {
  if (rows * cols != d.dim) throw DimensionError("disjunction dimension does not match shape");
  std::vector<double> w(d.dim, 0.0);
  for (std::size_t c : d.literals) w[c] = 1.0;
  return Halfspace(rows, cols, std::move(w), 0.5);
}

Halfspace negated_disjunction_halfspace(const Disjunction& d, std::size_t rows, std::size_t cols) {
  if (rows * cols != d.dim) throw DimensionError("disjunction dimension does not match shape");
  std::vector<double> w(d.dim, 0.0);
  for (std::size_t c : d.literals) w[c] = -1.0;
  return Halfspace(rows, cols, std::move(w), -0.5);
}

std::vector<std::size_t> descending_order(const std::vector<double>& w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::fabs(w[a]) > std::fabs(w[b]); });
  return order;
}

CriticalIndexReport critical_index(const std::vector<double>& w, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("tau must lie in (0, 1]");
  CriticalIndexReport r;
  r.order = descending_order(w);
  const std::size_t n = w.size();
  r.tail_norms.assign(n, 0.0);
  double acc = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    const double v = w[r.order[j]];
    acc += v * v;
    r.tail_norms[j] = std::sqrt(acc);
  }
  if (n == 0) {
    r.c_tau = 1;
    return r;
  }
  r.c_tau = kInfiniteIndex;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::fabs(w[r.order[j]]) <= tau * r.tail_norms[j] * (1.0 + 1e-12)) {
      r.c_tau = j + 1;
      break;
    }
  }
  return r;
}

std::vector<std::size_t> top_indices(const std::vector<double>& w, std::size_t t) {
  if (t > w.size()) throw DomainError("t exceeds dimension");
  auto order = descending_order(w);
  order.resize(t);
  return order;
}

std::vector<std::size_t> regularizing_prefix(const std::vector<double>& w, double tau) {
  const auto r = critical_index(w, tau);
  const std::size_t m = (r.c_tau == kInfiniteIndex) ? w.size() : r.c_tau - 1;
  return {r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(m)};
}

std::vector<std::size_t> critical_set(const std::vector<double>& w, double tau) {
  const auto r = critical_index(w, tau);
  const std::size_t m = (r.c_tau == kInfiniteIndex) ? w.size() : r.c_tau;
  return {r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(m)};
}

std::vector<double> truncate(const std::vector<double>& w, const std::vector<std::size_t>& S) {
  std::vector<double> out(w.size(), 0.0);
  for (std::size_t i : S) {
    if (i >= w.size()) throw DimensionError("truncate: index out of range");
    out[i] = w[i];
  }
  return out;
}

std::vector<double> remove_indices(const std::vector<double>& w, const std::vector<std::size_t>& S) {
  std::vector<double> out = w;
  for (std::size_t i : S) {
    if (i >= w.size()) throw DimensionError("remove_indices: index out of range");
    out[i] = 0.0;
  }
  return out;
}

double l2_norm(const std::vector<double>& w) {
  double s = 0.0;
  for (double x : w) s += x * x;
  return std::sqrt(s);
}

double l1_norm(const std::vector<double>& w) {
  double s = 0.0;
  for (double x : w) s += std::fabs(x);
  return s;
}

double decay_gap(double tau) { return 4.0 / (tau * tau) * std::log(1.0 / tau); }

DecayCheck check_geometric_decay(const std::vector<double>& w, double tau, std::size_t l) {
  const auto r = critical_index(w, tau);
  DecayCheck out;
  out.c_tau = r.c_tau;
  if (r.c_tau != kInfiniteIndex && r.c_tau <= l) {
    throw PreconditionError("check_geometric_decay needs c_tau > l; c_tau = " + std::to_string(r.c_tau) +
                            ", l = " + std::to_string(l));
  }
  const std::size_t n = w.size();
  const std::size_t last = std::min(l + 1, n);
  const double shrink = std::sqrt(1.0 - tau * tau);
  const double gap = decay_gap(tau);
  constexpr double kSlack = 1e-12;
  auto mag = [&](std::size_t j) { return std::fabs(w[r.order[j - 1]]); };
  auto sigma = [&](std::size_t j) { return r.tail_norms[j - 1]; };
  auto fail = [&](const std::string& what, std::size_t i, std::size_t j) {
    out.ok = false;
    out.failure = what + " at i=" + std::to_string(i) + ", j=" + std::to_string(j);
  };
  for (std::size_t i = 1; i <= last && out.ok; ++i) {
    for (std::size_t j = i; j <= last; ++j) {
      const double factor = std::pow(shrink, static_cast<double>(j - i));
      if (mag(j) > sigma(j) * (1 + kSlack)) {
        fail("|w_j| <= sigma_j", i, j);
        break;
      }
      if (sigma(j) > factor * sigma(i) * (1 + kSlack) + 1e-300) {
        fail("sigma_j <= (1-tau^2)^((j-i)/2) sigma_i", i, j);
        break;
      }
      // The last link uses sigma_i <= |w_i| / tau, which needs i < c_tau.
      if (i <= l && sigma(i) > 0.0 && factor * sigma(i) > factor * mag(i) / tau * (1 + kSlack)) {
        fail("sigma_i <= |w_i| / tau", i, j);
        break;
      }
      if (i <= l && static_cast<double>(j) > static_cast<double>(i) + gap &&
          mag(j) > mag(i) / 3.0 * (1 + kSlack)) {
        fail("|w_j| <= |w_i| / 3", i, j);
        break;
      }
    }
  }
  return out;
}

std::string halfspace_to_json(const Halfspace& h) {
  nlohmann::json j;
  j["format"] = "glhs-halfspace";
  j["version"] = 1;
  j["order"] = "row-major";
  j["rows"] = h.rows;
  j["cols"] = h.cols;
  j["weights"] = h.weights;
  j["theta"] = h.theta;
  return j.dump(1);
}

Halfspace halfspace_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("halfspace file: ") + e.what());
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw FormatError(std::string("halfspace file: missing field '") + key + "'");
    return j.at(key);
  };
  if (need("format") != "glhs-halfspace") throw FormatError("halfspace file: wrong format tag");
  if (need("version") != 1) throw FormatError("halfspace file: unsupported version");
  if (need("order") != "row-major") throw FormatError("halfspace file: unknown coordinate order");
  try {
    return Halfspace(need("rows").get<std::size_t>(), need("cols").get<std::size_t>(),
                     need("weights").get<std::vector<double>>(), need("theta").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("halfspace file: ") + e.what());
  } catch (const DimensionError& e) {
    throw FormatError(std::string("halfspace file: ") + e.what());
  }
}

void write_halfspace(const std::string& path, const Halfspace& h) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << halfspace_to_json(h) << "\n";
}

Halfspace read_halfspace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return halfspace_from_json(ss.str());
}

}  // namespace glhs
